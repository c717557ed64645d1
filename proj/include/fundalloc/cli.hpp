#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "fundalloc/dataset.hpp"
#include "fundalloc/evaluation.hpp"
#include "fundalloc/llm_gateway.hpp"
#include "fundalloc/retrieval.hpp"

namespace fundalloc::cli {

struct RetrievalConfig {
    int k = 3;
    std::string embedder = "builtin";  // builtin | remote
    std::string embed_url;             // FUNDALLOC_EMBED_URL overrides
    std::string embed_model = "all-minilm-l6-v2";
};

struct ProviderConfig {
    std::string kind = "mock";  // mock | http
    std::string base_url;       // FUNDALLOC_LLM_URL overrides
    std::string model_name;
    double temperature = 0.0;
    int timeout_s = 60;
    int max_retries = 2;
    int backoff_base_ms = 1000;
    int max_in_flight = 4;
    std::string script_path;  // mock only
    std::string api_key;      // FUNDALLOC_API_KEY overrides
};

struct ConstraintsConfig {
    std::map<RiskLevel, double> tau_by_risk_level = {
        {RiskLevel::Low, 0.10}, {RiskLevel::Medium, 0.13}, {RiskLevel::High, 0.16}};
    double risk_free_rate = 0.0;
};

struct RunConfig {
    data::DatasetConfig dataset;
    RetrievalConfig retrieval;
    ProviderConfig provider;
    // Model sources evaluated per fund, in order; for the mock provider the
    // i-th source consumes the i-th scripted response.
    std::vector<std::string> sources;
    ConstraintsConfig constraints;
    std::vector<double> sweep_grid = portfolio::default_sweep_grid();
    std::string query_template =
        "Recommend an optimized sector allocation for {fund_id} balancing return and risk.";
    std::filesystem::path out_dir = "out";
};

// Parses a JSON config document; unset fields keep their defaults.
// Throws config_error naming the offending field path.
RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config_json(const std::string& text);
void apply_env_overrides(RunConfig& config);
void validate_run_config(const RunConfig& config);

// Conventional file names under out_dir.
std::filesystem::path funds_csv_path(const RunConfig& config);
std::filesystem::path sector_returns_path(const RunConfig& config);
std::filesystem::path corpus_path(const RunConfig& config);
std::filesystem::path store_path(const RunConfig& config);

struct GenerateResult {
    int records = 0;
    int funds = 0;
    int months = 0;
};
GenerateResult cmd_generate(const RunConfig& config);

struct IngestResult {
    size_t documents = 0;
};
IngestResult cmd_ingest(const RunConfig& config);

llm::AllocationRecommendation cmd_recommend(const RunConfig& config, const std::string& fund_id,
                                            const std::string& query);

struct SweepResult {
    std::filesystem::path csv_path;
    std::vector<portfolio::BlendPoint> points;
};
SweepResult cmd_sweep(const RunConfig& config, const std::string& fund_id,
                      const std::string& model_id);

struct EvaluateResult {
    eval::ReportFiles files;
    size_t funds = 0;
    size_t sources = 0;
};
EvaluateResult cmd_evaluate(const RunConfig& config);

// Entry point used by main(); returns the process exit code
// (0 success, 1 usage/config, 2 data, 3 provider, 4 parse, 5 infeasible).
int run(const std::vector<std::string>& args);

}  // namespace fundalloc::cli
