#include "fundalloc/llm_gateway.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <condition_variable>
#include <fstream>
#include <sstream>
#include <thread>

#include "fundalloc/error.hpp"

namespace fundalloc::llm {

const char* const kSystemPrompt =
    "You are a financial assistant specializing in mutual fund portfolio optimization. "
    "Your role is to analyze user-provided data, apply advanced financial strategies, and "
    "recommend portfolio adjustments to maximize returns while considering the user's risk "
    "tolerance and investment goals.\n"
    "\n"
    "Key behaviors and constraints:\n"
    "1. Compliance: Always adhere to financial regulations and disclaimers, explicitly stating "
    "that you are not a licensed financial advisor and that users should consult professionals "
    "before making decisions.\n"
    "2. User-Focused: Prioritize the user's preferences, such as risk tolerance, time horizon, "
    "and specific goals (e.g., growth, income, or capital preservation).\n"
    "3. Clarity and Simplicity: Provide explanations that are clear and concise, including "
    "step-by-step rationale for your recommendations.\n"
    "4. Actionable Advice: Offer specific adjustments to the portfolio, such as rebalancing "
    "allocations, diversifying across asset classes, or switching to funds with lower expense "
    "ratios.\n"
    "5. Data Awareness: Provide recommendations based on the data you have been provided.\n"
    "\n"
    "Always act in the user's best interest and ensure your recommendations are tailored to "
    "their input and objectives.";

const char* const kOutputFormatInstruction =
    "Respond with a single JSON object whose keys are Technology, Healthcare, Finance, Energy "
    "and whose values are percentages summing to 100.";

PromptBundle build_prompt(const std::string& query,
                          const std::vector<std::pair<std::string, std::string>>& hits,
                          const std::string& fund_id) {
    if (query.find_first_not_of(" \t\r\n") == std::string::npos) {
        throw Error(ErrorKind::data, "input_error", "query is empty");
    }
    if (hits.empty()) {
        throw Error(ErrorKind::data, "context_missing", "no context documents retrieved");
    }
    if (hits.size() > 3) {
        throw Error(ErrorKind::config, "config_error",
                    "at most 3 context documents per prompt, got " + std::to_string(hits.size()));
    }

    PromptBundle bundle;
    bundle.system_text = kSystemPrompt;
    bundle.fund_id = fund_id;

    std::ostringstream user;
    user << "Fund: " << fund_id << "\n";
    user << "Query: " << query << "\n";
    for (const auto& [doc_id, text] : hits) {
        bundle.context_ids.push_back(doc_id);
        user << "\nContext: " << doc_id << "\n" << text;
        if (text.empty() || text.back() != '\n') user << "\n";
    }
    user << "\n" << kOutputFormatInstruction;
    bundle.user_text = user.str();
    return bundle;
}

std::string AllocationRecommendation::to_json() const {
    nlohmann::json weights_json;
    for (int i = 0; i < kNumSectors; ++i) {
        weights_json[sector_name(kSectorOrder[i])] = weights[i];
    }
    nlohmann::json j = {{"fund_id", fund_id},
                        {"model_id", model_id},
                        {"weights", weights_json},
                        {"repaired", repaired},
                        {"raw_text", raw_text}};
    return j.dump();
}

namespace {

// Returns the index one past the matching close brace, or npos.
size_t balanced_object_end(const std::string& text, size_t open) {
    int depth = 0;
    bool in_string = false;
    bool escaped = false;
    for (size_t i = open; i < text.size(); ++i) {
        const char c = text[i];
        if (in_string) {
            if (escaped) {
                escaped = false;
            } else if (c == '\\') {
                escaped = true;
            } else if (c == '"') {
                in_string = false;
            }
            continue;
        }
        if (c == '"') {
            in_string = true;
        } else if (c == '{') {
            ++depth;
        } else if (c == '}') {
            if (--depth == 0) return i + 1;
        }
    }
    return std::string::npos;
}

}  // namespace

AllocationRecommendation parse_allocation(const std::string& text, const std::string& fund_id,
                                          const std::string& model_id) {
    bool saw_partial = false;
    std::string partial_detail;
    nlohmann::json allocation;

    for (size_t pos = text.find('{'); pos != std::string::npos; pos = text.find('{', pos + 1)) {
        const size_t end = balanced_object_end(text, pos);
        if (end == std::string::npos) continue;
        nlohmann::json j = nlohmann::json::parse(text.substr(pos, end - pos), nullptr, false);
        if (j.is_discarded() || !j.is_object()) continue;

        int present = 0;
        int numeric = 0;
        for (SectorId id : kSectorOrder) {
            auto it = j.find(sector_name(id));
            if (it != j.end()) {
                ++present;
                if (it->is_number()) ++numeric;
            }
        }
        if (present == 0) continue;
        if (present == kNumSectors && numeric == kNumSectors) {
            allocation = std::move(j);
            break;
        }
        if (!saw_partial) {
            saw_partial = true;
            if (present < kNumSectors) {
                std::string missing;
                for (SectorId id : kSectorOrder) {
                    if (!j.contains(sector_name(id))) {
                        if (!missing.empty()) missing += ", ";
                        missing += sector_name(id);
                    }
                }
                partial_detail = "allocation object is missing key(s): " + missing;
            } else {
                partial_detail = "allocation object has a non-numeric sector value";
            }
        }
    }

    if (allocation.is_null()) {
        if (saw_partial) {
            throw Error(ErrorKind::parse, "schema_error", partial_detail);
        }
        throw Error(ErrorKind::parse, "parse_error",
                    "no JSON object with sector allocations found in completion text");
    }

    std::array<double, kNumSectors> percents{};
    double sum = 0.0;
    for (int i = 0; i < kNumSectors; ++i) {
        percents[i] = std::max(allocation[sector_name(kSectorOrder[i])].get<double>(), 0.0);
        sum += percents[i];
    }
    if (sum < 90.0 || sum > 110.0) {
        throw Error(ErrorKind::parse, "implausible_allocation",
                    "sector percentages sum to " + std::to_string(sum) +
                        ", outside the plausible range [90, 110]");
    }

    AllocationRecommendation rec;
    rec.fund_id = fund_id;
    rec.model_id = model_id;
    rec.raw_text = text;
    rec.weights = portfolio::normalize(percents);
    rec.repaired = std::abs(sum - 100.0) > 0.01;
    return rec;
}

HttpChatProvider::HttpChatProvider(HttpProviderConfig config,
                                   std::shared_ptr<net::HttpTransport> transport)
    : config_(std::move(config)), transport_(std::move(transport)) {
    if (config_.base_url.empty()) {
        throw Error(ErrorKind::config, "config_error", "http provider requires a base URL");
    }
    if (config_.max_in_flight < 1) {
        throw Error(ErrorKind::config, "config_error", "max_in_flight must be >= 1");
    }
}

Completion HttpChatProvider::complete(const PromptBundle& bundle, const std::string& model_name) {
    nlohmann::json body = {
        {"model", model_name},
        {"messages",
         {{{"role", "system"}, {"content", bundle.system_text}},
          {{"role", "user"}, {"content", bundle.user_text}}}},
        {"temperature", config_.temperature},
    };
    const std::string payload = body.dump();

    struct SlotGuard {
        HttpChatProvider& p;
        explicit SlotGuard(HttpChatProvider& provider) : p(provider) {
            std::unique_lock lock(p.slots_mutex_);
            p.slots_cv_.wait(lock, [&] { return p.in_flight_ < p.config_.max_in_flight; });
            ++p.in_flight_;
        }
        ~SlotGuard() {
            {
                std::lock_guard lock(p.slots_mutex_);
                --p.in_flight_;
            }
            p.slots_cv_.notify_one();
        }
    } guard(*this);

    const int attempts = 1 + std::max(config_.max_retries, 0);
    for (int attempt = 0; attempt < attempts; ++attempt) {
        if (attempt > 0) {
            const auto delay =
                std::chrono::milliseconds(config_.backoff_base_ms) * (1LL << (attempt - 1));
            std::this_thread::sleep_for(delay);
        }
        try {
            auto response = transport_->post_json(config_.base_url, "/chat/completions", payload,
                                                  config_.api_key, config_.timeout_s);
            if (response.status < 200 || response.status >= 300) {
                throw Error(ErrorKind::provider, "provider_error",
                            "chat endpoint returned status " + std::to_string(response.status) +
                                ": " + response.body.substr(0, 200));
            }
            nlohmann::json j = nlohmann::json::parse(response.body, nullptr, false);
            if (j.is_discarded() || !j.contains("choices") || j["choices"].empty() ||
                !j["choices"][0].contains("message") ||
                !j["choices"][0]["message"].contains("content")) {
                throw Error(ErrorKind::provider, "provider_error",
                            "malformed chat completion response: " + response.body.substr(0, 200));
            }
            Completion out;
            out.model_id = j.value("model", model_name);
            if (out.model_id.empty()) out.model_id = model_name;
            out.text = j["choices"][0]["message"]["content"].get<std::string>();
            return out;
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::provider || attempt + 1 == attempts) throw;
        }
    }
    throw Error(ErrorKind::provider, "provider_error", "unreachable");
}

std::unique_ptr<MockChatProvider> MockChatProvider::from_file(
    const std::filesystem::path& script_path) {
    std::ifstream file(script_path);
    if (!file) {
        throw Error(ErrorKind::provider, "script_error",
                    "cannot open mock script " + script_path.string());
    }
    std::ostringstream buffer;
    buffer << file.rdbuf();
    return from_json_text(buffer.str());
}

std::unique_ptr<MockChatProvider> MockChatProvider::from_json_text(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        throw Error(ErrorKind::provider, "script_error", "mock script is not a JSON object");
    }
    std::unique_ptr<MockChatProvider> provider(new MockChatProvider());
    for (const auto& [fund, entries] : j.items()) {
        if (!entries.is_array()) {
            throw Error(ErrorKind::provider, "script_error",
                        "mock script entry for '" + fund + "' must be a list of strings");
        }
        std::vector<std::string> responses;
        for (const auto& e : entries) {
            if (!e.is_string()) {
                throw Error(ErrorKind::provider, "script_error",
                            "mock script entry for '" + fund + "' must be a list of strings");
            }
            responses.push_back(e.get<std::string>());
        }
        provider->script_[fund] = std::move(responses);
    }
    return provider;
}

Completion MockChatProvider::complete(const PromptBundle& bundle, const std::string& model_name) {
    std::lock_guard lock(mutex_);
    auto it = script_.find(bundle.fund_id);
    if (it == script_.end()) {
        throw Error(ErrorKind::provider, "script_error",
                    "mock script has no entry for fund '" + bundle.fund_id + "'");
    }
    size_t& cursor = cursor_[bundle.fund_id];
    if (cursor >= it->second.size()) {
        throw Error(ErrorKind::provider, "script_error",
                    "mock script exhausted for fund '" + bundle.fund_id + "' (" +
                        std::to_string(it->second.size()) + " entries)");
    }
    Completion out;
    out.model_id = model_name.empty() ? "mock" : model_name;
    out.text = it->second[cursor++];
    return out;
}

}  // namespace fundalloc::llm
