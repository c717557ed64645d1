#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <shared_mutex>
#include <string>
#include <utility>
#include <vector>

#include "fundalloc/http_transport.hpp"

namespace fundalloc::retrieval {

inline constexpr int kEmbeddingDim = 384;

struct EmbeddedDocument {
    std::string doc_id;
    std::string text;
    std::vector<double> vector;  // kEmbeddingDim components, unit L2 norm
};

struct SearchHit {
    std::string doc_id;
    double score = 0.0;  // cosine similarity in [-1, 1]
};

class Embedder {
public:
    virtual ~Embedder() = default;
    virtual std::vector<double> embed(const std::string& text) = 0;
    virtual std::vector<std::vector<double>> embed_batch(const std::vector<std::string>& texts);
};

// Deterministic feature-hashing embedder: lowercased alphanumeric tokens
// hashed into kEmbeddingDim signed buckets, then L2-normalized.
class BuiltinEmbedder : public Embedder {
public:
    std::vector<double> embed(const std::string& text) override;
};

struct RemoteEmbedderConfig {
    std::string base_url;
    std::string api_key;
    std::string model = "all-minilm-l6-v2";
    int timeout_s = 60;
};

// Delegates to the embeddings wire endpoint (POST <base>/embeddings with
// {"model", "input": [...]}) and L2-normalizes the returned vectors.
class RemoteEmbedder : public Embedder {
public:
    RemoteEmbedder(RemoteEmbedderConfig config, std::shared_ptr<net::HttpTransport> transport);

    std::vector<double> embed(const std::string& text) override;
    std::vector<std::vector<double>> embed_batch(const std::vector<std::string>& texts) override;

private:
    RemoteEmbedderConfig config_;
    std::shared_ptr<net::HttpTransport> transport_;
};

// Exact cosine top-k store. Many concurrent readers or one writer.
class VectorStore {
public:
    VectorStore() = default;
    VectorStore(VectorStore&& other) noexcept;
    VectorStore& operator=(VectorStore&& other) noexcept;

    void upsert(EmbeddedDocument doc);  // last write wins per doc_id
    size_t size() const;
    bool contains(const std::string& doc_id) const;
    // Throws data error when the id is unknown.
    EmbeddedDocument get(const std::string& doc_id) const;

    // min(k, size) hits sorted by score descending, ties by ascending doc_id.
    std::vector<SearchHit> search_vector(const std::vector<double>& query, int k) const;

    void save(const std::filesystem::path& path) const;  // newline-delimited JSON
    static VectorStore load(const std::filesystem::path& path);

private:
    mutable std::shared_mutex mutex_;
    std::map<std::string, EmbeddedDocument> docs_;
};

// Embeds the query and runs exact top-k search.
std::vector<SearchHit> search(const VectorStore& store, Embedder& embedder,
                              const std::string& query, int k = 3);

double cosine(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace fundalloc::retrieval
