#include "fundalloc/retrieval.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <mutex>

#include "fundalloc/error.hpp"

namespace fundalloc::retrieval {

namespace {

std::uint64_t fnv1a(const std::string& token) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : token) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

void l2_normalize(std::vector<double>& v, const std::string& context) {
    double norm_sq = 0.0;
    for (double x : v) norm_sq += x * x;
    if (norm_sq <= 0.0) {
        throw Error(ErrorKind::data, "input_error", context + " produced a zero embedding");
    }
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (double& x : v) x *= inv;
}

}  // namespace

std::vector<std::vector<double>> Embedder::embed_batch(const std::vector<std::string>& texts) {
    std::vector<std::vector<double>> out;
    out.reserve(texts.size());
    for (const auto& t : texts) out.push_back(embed(t));
    return out;
}

std::vector<double> BuiltinEmbedder::embed(const std::string& text) {
    bool blank = true;
    for (unsigned char c : text) {
        if (!std::isspace(c)) {
            blank = false;
            break;
        }
    }
    if (blank) {
        throw Error(ErrorKind::data, "input_error", "cannot embed empty text");
    }

    std::vector<double> v(kEmbeddingDim, 0.0);
    std::string token;
    auto flush = [&] {
        if (token.empty()) return;
        const std::uint64_t h = fnv1a(token);
        const int bucket = static_cast<int>(h % kEmbeddingDim);
        const double sign = (h >> 63) ? -1.0 : 1.0;
        v[bucket] += sign;
        token.clear();
    };
    for (unsigned char c : text) {
        if (std::isalnum(c)) {
            token += static_cast<char>(std::tolower(c));
        } else {
            flush();
        }
    }
    flush();

    l2_normalize(v, "text '" + text.substr(0, 32) + "'");
    return v;
}

RemoteEmbedder::RemoteEmbedder(RemoteEmbedderConfig config,
                               std::shared_ptr<net::HttpTransport> transport)
    : config_(std::move(config)), transport_(std::move(transport)) {
    if (config_.base_url.empty()) {
        throw Error(ErrorKind::config, "config_error", "remote embedder requires a base URL");
    }
}

std::vector<double> RemoteEmbedder::embed(const std::string& text) {
    return embed_batch({text}).front();
}

std::vector<std::vector<double>> RemoteEmbedder::embed_batch(const std::vector<std::string>& texts) {
    for (const auto& t : texts) {
        if (t.find_first_not_of(" \t\r\n") == std::string::npos) {
            throw Error(ErrorKind::data, "input_error", "cannot embed empty text");
        }
    }
    nlohmann::json body = {{"model", config_.model}, {"input", texts}};
    auto response = transport_->post_json(config_.base_url, "/embeddings", body.dump(),
                                          config_.api_key, config_.timeout_s);
    if (response.status < 200 || response.status >= 300) {
        throw Error(ErrorKind::provider, "provider_error",
                    "embeddings endpoint returned status " + std::to_string(response.status) +
                        ": " + response.body.substr(0, 200));
    }
    nlohmann::json j = nlohmann::json::parse(response.body, nullptr, false);
    if (j.is_discarded() || !j.contains("data") || !j["data"].is_array() ||
        j["data"].size() != texts.size()) {
        throw Error(ErrorKind::provider, "provider_error", "malformed embeddings response");
    }
    std::vector<std::vector<double>> out;
    out.reserve(texts.size());
    for (size_t i = 0; i < texts.size(); ++i) {
        const auto& entry = j["data"][i];
        if (!entry.contains("embedding") || !entry["embedding"].is_array()) {
            throw Error(ErrorKind::provider, "provider_error", "malformed embeddings response");
        }
        std::vector<double> v = entry["embedding"].get<std::vector<double>>();
        l2_normalize(v, "remote embedding");
        out.push_back(std::move(v));
    }
    return out;
}

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) {
        throw Error(ErrorKind::data, "data_error", "embedding dimension mismatch");
    }
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na <= 0.0 || nb <= 0.0) {
        throw Error(ErrorKind::data, "data_error", "cosine of a zero vector");
    }
    return dot / std::sqrt(na * nb);
}

VectorStore::VectorStore(VectorStore&& other) noexcept {
    std::unique_lock lock(other.mutex_);
    docs_ = std::move(other.docs_);
}

VectorStore& VectorStore::operator=(VectorStore&& other) noexcept {
    if (this != &other) {
        std::scoped_lock lock(mutex_, other.mutex_);
        docs_ = std::move(other.docs_);
    }
    return *this;
}

void VectorStore::upsert(EmbeddedDocument doc) {
    if (doc.vector.size() != kEmbeddingDim) {
        throw Error(ErrorKind::data, "data_error",
                    "embedding for '" + doc.doc_id + "' has dimension " +
                        std::to_string(doc.vector.size()) + ", expected " +
                        std::to_string(kEmbeddingDim));
    }
    double norm_sq = 0.0;
    for (double x : doc.vector) norm_sq += x * x;
    if (std::abs(std::sqrt(norm_sq) - 1.0) > 1e-9) {
        throw Error(ErrorKind::data, "data_error",
                    "embedding for '" + doc.doc_id + "' is not unit-norm");
    }
    std::unique_lock lock(mutex_);
    docs_[doc.doc_id] = std::move(doc);
}

size_t VectorStore::size() const {
    std::shared_lock lock(mutex_);
    return docs_.size();
}

bool VectorStore::contains(const std::string& doc_id) const {
    std::shared_lock lock(mutex_);
    return docs_.count(doc_id) > 0;
}

EmbeddedDocument VectorStore::get(const std::string& doc_id) const {
    std::shared_lock lock(mutex_);
    auto it = docs_.find(doc_id);
    if (it == docs_.end()) {
        throw Error(ErrorKind::data, "data_error", "unknown document id '" + doc_id + "'");
    }
    return it->second;
}

std::vector<SearchHit> VectorStore::search_vector(const std::vector<double>& query, int k) const {
    if (k < 1) {
        throw Error(ErrorKind::data, "input_error", "k must be >= 1");
    }
    std::shared_lock lock(mutex_);
    if (docs_.empty()) {
        throw Error(ErrorKind::data, "empty_store", "search on an empty vector store");
    }
    std::vector<SearchHit> hits;
    hits.reserve(docs_.size());
    for (const auto& [id, doc] : docs_) {
        hits.push_back({id, cosine(query, doc.vector)});
    }
    std::sort(hits.begin(), hits.end(), [](const SearchHit& a, const SearchHit& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.doc_id < b.doc_id;
    });
    if (hits.size() > static_cast<size_t>(k)) hits.resize(k);
    return hits;
}

void VectorStore::save(const std::filesystem::path& path) const {
    std::shared_lock lock(mutex_);
    std::ofstream file(path);
    if (!file) {
        throw Error(ErrorKind::data, "io_error", "cannot open " + path.string() + " for writing");
    }
    for (const auto& [id, doc] : docs_) {
        nlohmann::json j = {{"doc_id", doc.doc_id}, {"text", doc.text}, {"vector", doc.vector}};
        file << j.dump() << "\n";
    }
}

VectorStore VectorStore::load(const std::filesystem::path& path) {
    std::ifstream file(path);
    if (!file) {
        throw Error(ErrorKind::data, "io_error", "cannot open " + path.string());
    }
    VectorStore store;
    std::string line;
    int line_no = 0;
    while (std::getline(file, line)) {
        ++line_no;
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.contains("doc_id") || !j.contains("text") ||
            !j.contains("vector")) {
            throw Error(ErrorKind::data, "data_error",
                        path.string() + " line " + std::to_string(line_no) +
                            ": malformed store entry");
        }
        EmbeddedDocument doc;
        doc.doc_id = j["doc_id"].get<std::string>();
        doc.text = j["text"].get<std::string>();
        doc.vector = j["vector"].get<std::vector<double>>();
        store.upsert(std::move(doc));
    }
    return store;
}

std::vector<SearchHit> search(const VectorStore& store, Embedder& embedder,
                              const std::string& query, int k) {
    return store.search_vector(embedder.embed(query), k);
}

}  // namespace fundalloc::retrieval
