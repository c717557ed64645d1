#pragma once

#include <condition_variable>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "fundalloc/http_transport.hpp"
#include "fundalloc/portfolio.hpp"

namespace fundalloc::llm {

// System prompt handed to every completion.
extern const char* const kSystemPrompt;
// Fixed machine-readable output contract appended to every user message.
extern const char* const kOutputFormatInstruction;

struct PromptBundle {
    std::string system_text;
    std::string user_text;
    std::vector<std::string> context_ids;
    std::string fund_id;  // fund the query is about; used for mock scripting
};

// Assembles the prompt from the query and 1..3 retrieved (doc_id, text)
// documents, in hit order. Deterministic for fixed inputs.
PromptBundle build_prompt(const std::string& query,
                          const std::vector<std::pair<std::string, std::string>>& hits,
                          const std::string& fund_id);

struct AllocationRecommendation {
    std::string fund_id;
    std::string model_id;
    portfolio::SectorWeights weights = portfolio::SectorWeights::unchecked({0.25, 0.25, 0.25, 0.25});
    std::string raw_text;
    bool repaired = false;

    std::string to_json() const;
};

// Extracts the first balanced JSON object carrying all four sector
// percentages from free-form completion text, repairs sums in [90, 110]
// by renormalizing to 100, and converts to simplex fractions.
AllocationRecommendation parse_allocation(const std::string& text, const std::string& fund_id,
                                          const std::string& model_id);

struct Completion {
    std::string model_id;  // provider-reported model name
    std::string text;
};

class ChatProvider {
public:
    virtual ~ChatProvider() = default;
    virtual Completion complete(const PromptBundle& bundle, const std::string& model_name) = 0;
};

struct HttpProviderConfig {
    std::string base_url;
    std::string api_key;
    double temperature = 0.0;
    int timeout_s = 60;
    int max_retries = 2;       // attempts beyond the first
    int backoff_base_ms = 1000;  // 1 s, 2 s, 4 s, ...
    int max_in_flight = 4;
};

// One chat-completion round trip per call against an open-protocol server
// (POST <base>/chat/completions). Retries transport failures and non-2xx
// responses with exponential backoff. Concurrent calls are capped by
// max_in_flight.
class HttpChatProvider : public ChatProvider {
public:
    HttpChatProvider(HttpProviderConfig config, std::shared_ptr<net::HttpTransport> transport);

    Completion complete(const PromptBundle& bundle, const std::string& model_name) override;

private:
    HttpProviderConfig config_;
    std::shared_ptr<net::HttpTransport> transport_;
    std::mutex slots_mutex_;
    std::condition_variable slots_cv_;
    int in_flight_ = 0;
};

// Scripted provider: a JSON map from fund_id to an ordered list of response
// strings. Each completion for a fund consumes the next entry, which makes
// multi-source pipelines byte-reproducible. Reports the requested model
// name back as the model id.
class MockChatProvider : public ChatProvider {
public:
    static std::unique_ptr<MockChatProvider> from_file(const std::filesystem::path& script_path);
    static std::unique_ptr<MockChatProvider> from_json_text(const std::string& text);

    Completion complete(const PromptBundle& bundle, const std::string& model_name) override;

private:
    MockChatProvider() = default;
    std::mutex mutex_;
    std::map<std::string, std::vector<std::string>> script_;
    std::map<std::string, size_t> cursor_;
};

}  // namespace fundalloc::llm
