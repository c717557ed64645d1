#include "fundalloc/cli.hpp"

#include "CLI11.hpp"
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "fundalloc/error.hpp"
#include "fundalloc/market_model.hpp"

namespace fundalloc::cli {

namespace {

using nlohmann::json;

double get_number(const json& j, const std::string& path) {
    if (!j.is_number()) {
        throw Error(ErrorKind::config, "config_error", path + " must be a number");
    }
    return j.get<double>();
}

int get_int(const json& j, const std::string& path) {
    if (!j.is_number_integer()) {
        throw Error(ErrorKind::config, "config_error", path + " must be an integer");
    }
    return j.get<int>();
}

std::string get_string(const json& j, const std::string& path) {
    if (!j.is_string()) {
        throw Error(ErrorKind::config, "config_error", path + " must be a string");
    }
    return j.get<std::string>();
}

std::array<double, kNumSectors> get_sector_map(const json& j, const std::string& path) {
    if (!j.is_object()) {
        throw Error(ErrorKind::config, "config_error",
                    path + " must be an object keyed by sector name");
    }
    std::array<double, kNumSectors> out{};
    for (int i = 0; i < kNumSectors; ++i) {
        const char* name = sector_name(kSectorOrder[i]);
        if (!j.contains(name)) {
            throw Error(ErrorKind::config, "config_error",
                        path + " is missing sector '" + name + "'");
        }
        out[i] = get_number(j.at(name), path + "." + name);
    }
    return out;
}

std::array<double, 2> get_range(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2) {
        throw Error(ErrorKind::config, "config_error", path + " must be a [lo, hi] pair");
    }
    return {get_number(j[0], path + "[0]"), get_number(j[1], path + "[1]")};
}

void parse_dataset_config(const json& j, data::DatasetConfig& out) {
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer()) {
            throw Error(ErrorKind::config, "config_error", "dataset.seed must be an integer");
        }
        out.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("n_funds")) out.n_funds = get_int(j["n_funds"], "dataset.n_funds");
    if (j.contains("n_months")) out.n_months = get_int(j["n_months"], "dataset.n_months");
    if (j.contains("start")) {
        auto ym = YearMonth::parse(get_string(j["start"], "dataset.start"));
        if (!ym) {
            throw Error(ErrorKind::config, "config_error", "dataset.start must be 'YYYY-MM'");
        }
        out.start = *ym;
    }
    if (j.contains("base_monthly_means")) {
        out.base_monthly_means = get_sector_map(j["base_monthly_means"], "dataset.base_monthly_means");
    }
    if (j.contains("macro_sensitivity")) {
        out.macro_sensitivity = get_sector_map(j["macro_sensitivity"], "dataset.macro_sensitivity");
    }
    if (j.contains("interest_rate_range")) {
        out.interest_rate_range = get_range(j["interest_rate_range"], "dataset.interest_rate_range");
    }
    if (j.contains("inflation_rate_range")) {
        out.inflation_rate_range =
            get_range(j["inflation_rate_range"], "dataset.inflation_rate_range");
    }
    if (j.contains("base_monthly_cov")) {
        const auto& rows = j["base_monthly_cov"];
        if (!rows.is_array() || rows.size() != 4) {
            throw Error(ErrorKind::config, "config_error",
                        "dataset.base_monthly_cov must be a 4x4 array");
        }
        for (int r = 0; r < 4; ++r) {
            if (!rows[r].is_array() || rows[r].size() != 4) {
                throw Error(ErrorKind::config, "config_error",
                            "dataset.base_monthly_cov must be a 4x4 array");
            }
            for (int c = 0; c < 4; ++c) {
                out.base_monthly_cov(r, c) =
                    get_number(rows[r][c], "dataset.base_monthly_cov");
            }
        }
    }
}

}  // namespace

RunConfig parse_config_json(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        throw Error(ErrorKind::config, "config_error", "config file is not a JSON object");
    }

    RunConfig config;
    if (j.contains("dataset")) parse_dataset_config(j["dataset"], config.dataset);

    if (j.contains("retrieval")) {
        const auto& r = j["retrieval"];
        if (r.contains("k")) config.retrieval.k = get_int(r["k"], "retrieval.k");
        if (r.contains("embedder")) {
            config.retrieval.embedder = get_string(r["embedder"], "retrieval.embedder");
        }
        if (r.contains("embed_url")) {
            config.retrieval.embed_url = get_string(r["embed_url"], "retrieval.embed_url");
        }
        if (r.contains("embed_model")) {
            config.retrieval.embed_model = get_string(r["embed_model"], "retrieval.embed_model");
        }
    }

    if (j.contains("provider")) {
        const auto& p = j["provider"];
        if (p.contains("kind")) config.provider.kind = get_string(p["kind"], "provider.kind");
        if (p.contains("base_url")) {
            config.provider.base_url = get_string(p["base_url"], "provider.base_url");
        }
        if (p.contains("model_name")) {
            config.provider.model_name = get_string(p["model_name"], "provider.model_name");
        }
        if (p.contains("temperature")) {
            config.provider.temperature = get_number(p["temperature"], "provider.temperature");
        }
        if (p.contains("timeout_s")) {
            config.provider.timeout_s = get_int(p["timeout_s"], "provider.timeout_s");
        }
        if (p.contains("max_retries")) {
            config.provider.max_retries = get_int(p["max_retries"], "provider.max_retries");
        }
        if (p.contains("backoff_base_ms")) {
            config.provider.backoff_base_ms =
                get_int(p["backoff_base_ms"], "provider.backoff_base_ms");
        }
        if (p.contains("max_in_flight")) {
            config.provider.max_in_flight = get_int(p["max_in_flight"], "provider.max_in_flight");
        }
        if (p.contains("script_path")) {
            config.provider.script_path = get_string(p["script_path"], "provider.script_path");
        }
        if (p.contains("api_key")) {
            config.provider.api_key = get_string(p["api_key"], "provider.api_key");
        }
    }

    if (j.contains("sources")) {
        if (!j["sources"].is_array()) {
            throw Error(ErrorKind::config, "config_error", "sources must be a list of strings");
        }
        for (const auto& s : j["sources"]) {
            config.sources.push_back(get_string(s, "sources[]"));
        }
    }

    if (j.contains("constraints")) {
        const auto& c = j["constraints"];
        if (c.contains("risk_free_rate")) {
            config.constraints.risk_free_rate =
                get_number(c["risk_free_rate"], "constraints.risk_free_rate");
        }
        if (c.contains("tau_by_risk_level")) {
            const auto& taus = c["tau_by_risk_level"];
            if (!taus.is_object()) {
                throw Error(ErrorKind::config, "config_error",
                            "constraints.tau_by_risk_level must be an object");
            }
            for (const auto& [key, value] : taus.items()) {
                auto level = risk_level_from_name(key);
                if (!level) {
                    throw Error(ErrorKind::config, "config_error",
                                "constraints.tau_by_risk_level has unknown level '" + key + "'");
                }
                config.constraints.tau_by_risk_level[*level] =
                    get_number(value, "constraints.tau_by_risk_level." + key);
            }
        }
    }

    if (j.contains("sweep_grid")) {
        if (!j["sweep_grid"].is_array() || j["sweep_grid"].empty()) {
            throw Error(ErrorKind::config, "config_error",
                        "sweep_grid must be a non-empty list of numbers");
        }
        config.sweep_grid.clear();
        for (const auto& v : j["sweep_grid"]) {
            config.sweep_grid.push_back(get_number(v, "sweep_grid[]"));
        }
    }

    if (j.contains("query_template")) {
        config.query_template = get_string(j["query_template"], "query_template");
    }
    if (j.contains("out_dir")) config.out_dir = get_string(j["out_dir"], "out_dir");

    return config;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream file(path);
    if (!file) {
        throw Error(ErrorKind::config, "config_error", "cannot open config file " + path.string());
    }
    std::ostringstream buffer;
    buffer << file.rdbuf();
    RunConfig config = parse_config_json(buffer.str());
    return config;
}

void apply_env_overrides(RunConfig& config) {
    if (const char* v = std::getenv("FUNDALLOC_LLM_URL"); v && *v) config.provider.base_url = v;
    if (const char* v = std::getenv("FUNDALLOC_EMBED_URL"); v && *v) config.retrieval.embed_url = v;
    if (const char* v = std::getenv("FUNDALLOC_API_KEY"); v && *v) config.provider.api_key = v;
}

void validate_run_config(const RunConfig& config) {
    data::validate_config(config.dataset);

    if (config.retrieval.k < 1) {
        throw Error(ErrorKind::config, "config_error", "retrieval.k must be >= 1");
    }
    if (config.retrieval.embedder != "builtin" && config.retrieval.embedder != "remote") {
        throw Error(ErrorKind::config, "config_error",
                    "retrieval.embedder must be 'builtin' or 'remote'");
    }
    if (config.retrieval.embedder == "remote" && config.retrieval.embed_url.empty()) {
        throw Error(ErrorKind::config, "config_error",
                    "retrieval.embed_url (or FUNDALLOC_EMBED_URL) is required for the remote "
                    "embedder");
    }

    if (config.provider.kind != "mock" && config.provider.kind != "http") {
        throw Error(ErrorKind::config, "config_error", "provider.kind must be 'mock' or 'http'");
    }
    if (config.provider.kind == "mock" && config.provider.script_path.empty()) {
        throw Error(ErrorKind::config, "config_error",
                    "provider.script_path is required for the mock provider");
    }
    if (config.provider.kind == "http" && config.provider.base_url.empty()) {
        throw Error(ErrorKind::config, "config_error",
                    "provider.base_url (or FUNDALLOC_LLM_URL) is required for the http provider");
    }
    if (config.provider.timeout_s <= 0) {
        throw Error(ErrorKind::config, "config_error", "provider.timeout_s must be positive");
    }
    if (config.provider.max_retries < 0) {
        throw Error(ErrorKind::config, "config_error", "provider.max_retries must be >= 0");
    }
    if (config.provider.max_in_flight < 1) {
        throw Error(ErrorKind::config, "config_error", "provider.max_in_flight must be >= 1");
    }

    if (config.sweep_grid.empty()) {
        throw Error(ErrorKind::config, "config_error", "sweep_grid must be non-empty");
    }
    for (size_t i = 0; i < config.sweep_grid.size(); ++i) {
        const double v = config.sweep_grid[i];
        if (!(v >= 0.0 && v <= 1.0)) {
            throw Error(ErrorKind::config, "config_error",
                        "sweep_grid values must lie in [0, 1]");
        }
        if (i > 0 && !(v > config.sweep_grid[i - 1])) {
            throw Error(ErrorKind::config, "config_error",
                        "sweep_grid must be strictly increasing");
        }
    }

    for (const auto& [level, tau] : config.constraints.tau_by_risk_level) {
        if (!(tau > 0.0)) {
            throw Error(ErrorKind::config, "config_error",
                        std::string("constraints.tau_by_risk_level.") + risk_level_name(level) +
                            " must be positive");
        }
    }
    if (!std::isfinite(config.constraints.risk_free_rate)) {
        throw Error(ErrorKind::config, "config_error",
                    "constraints.risk_free_rate must be finite");
    }
}

std::filesystem::path funds_csv_path(const RunConfig& config) {
    return config.out_dir / "funds.csv";
}
std::filesystem::path sector_returns_path(const RunConfig& config) {
    return config.out_dir / "sector_returns.csv";
}
std::filesystem::path corpus_path(const RunConfig& config) {
    return config.out_dir / "corpus.jsonl";
}
std::filesystem::path store_path(const RunConfig& config) {
    return config.out_dir / "store.jsonl";
}

namespace {

std::vector<std::string> effective_sources(const RunConfig& config) {
    if (!config.sources.empty()) return config.sources;
    if (!config.provider.model_name.empty()) return {config.provider.model_name};
    return {"mock-model"};
}

std::unique_ptr<retrieval::Embedder> make_embedder(const RunConfig& config) {
    if (config.retrieval.embedder == "remote") {
        retrieval::RemoteEmbedderConfig rc;
        rc.base_url = config.retrieval.embed_url;
        rc.api_key = config.provider.api_key;
        rc.model = config.retrieval.embed_model;
        rc.timeout_s = config.provider.timeout_s;
        return std::make_unique<retrieval::RemoteEmbedder>(rc, net::make_httplib_transport());
    }
    return std::make_unique<retrieval::BuiltinEmbedder>();
}

std::unique_ptr<llm::ChatProvider> make_provider(const RunConfig& config) {
    if (config.provider.kind == "mock") {
        return llm::MockChatProvider::from_file(config.provider.script_path);
    }
    llm::HttpProviderConfig hc;
    hc.base_url = config.provider.base_url;
    hc.api_key = config.provider.api_key;
    hc.temperature = config.provider.temperature;
    hc.timeout_s = config.provider.timeout_s;
    hc.max_retries = config.provider.max_retries;
    hc.backoff_base_ms = config.provider.backoff_base_ms;
    hc.max_in_flight = config.provider.max_in_flight;
    return std::make_unique<llm::HttpChatProvider>(hc, net::make_httplib_transport());
}

std::string render_query(const RunConfig& config, const std::string& fund_id) {
    std::string query = config.query_template;
    const std::string token = "{fund_id}";
    for (size_t pos = query.find(token); pos != std::string::npos; pos = query.find(token, pos)) {
        query.replace(pos, token.size(), fund_id);
        pos += fund_id.size();
    }
    return query;
}

retrieval::VectorStore load_store_or_throw(const RunConfig& config) {
    const auto path = store_path(config);
    if (!std::filesystem::exists(path)) {
        throw Error(ErrorKind::data, "io_error",
                    "vector store " + path.string() + " not found; run `ingest` first");
    }
    return retrieval::VectorStore::load(path);
}

// Retrieval + prompt + one completion per source for one fund.
std::vector<llm::AllocationRecommendation> recommend_for_fund(
    const RunConfig& config, const retrieval::VectorStore& store, retrieval::Embedder& embedder,
    llm::ChatProvider& provider, const std::vector<std::string>& sources,
    const std::string& fund_id, const std::string& query) {
    auto hits = retrieval::search(store, embedder, query, config.retrieval.k);

    const std::string prefix = fund_id + "/";
    bool fund_in_context = false;
    std::vector<std::pair<std::string, std::string>> docs;
    for (const auto& hit : hits) {
        if (hit.doc_id.rfind(prefix, 0) == 0) fund_in_context = true;
        docs.emplace_back(hit.doc_id, store.get(hit.doc_id).text);
    }
    if (!fund_in_context) {
        throw Error(ErrorKind::data, "context_missing",
                    "retrieval returned no documents for fund '" + fund_id + "'");
    }
    if (docs.size() > 3) docs.resize(3);

    auto bundle = llm::build_prompt(query, docs, fund_id);
    std::vector<llm::AllocationRecommendation> recs;
    recs.reserve(sources.size());
    for (const auto& source : sources) {
        auto completion = provider.complete(bundle, source);
        recs.push_back(llm::parse_allocation(completion.text, fund_id, completion.model_id));
    }
    return recs;
}

struct FundBaseline {
    portfolio::SectorWeights weights = portfolio::SectorWeights::unchecked({0.25, 0.25, 0.25, 0.25});
    RiskLevel risk_level = RiskLevel::Medium;
};

FundBaseline baseline_for_fund(const std::vector<data::FundRecord>& records,
                               const std::string& fund_id) {
    for (const auto& r : records) {
        if (r.fund_id == fund_id) {
            return {portfolio::normalize(r.exposures), r.risk_level};
        }
    }
    throw Error(ErrorKind::data, "data_error", "unknown fund '" + fund_id + "' in dataset");
}

portfolio::Constraints constraints_for(const RunConfig& config, RiskLevel level) {
    portfolio::Constraints c;
    auto it = config.constraints.tau_by_risk_level.find(level);
    c.tau = it != config.constraints.tau_by_risk_level.end() ? it->second
                                                             : portfolio::default_tau(level);
    c.risk_free_rate = config.constraints.risk_free_rate;
    return c;
}

std::vector<std::string> fund_ids_in_order(const std::vector<data::FundRecord>& records) {
    std::vector<std::string> ids;
    for (const auto& r : records) {
        if (ids.empty() || ids.back() != r.fund_id) {
            if (std::find(ids.begin(), ids.end(), r.fund_id) == ids.end()) {
                ids.push_back(r.fund_id);
            }
        }
    }
    return ids;
}

}  // namespace

GenerateResult cmd_generate(const RunConfig& config) {
    validate_run_config(config);
    auto dataset = data::generate_dataset(config.dataset);

    std::error_code ec;
    std::filesystem::create_directories(config.out_dir, ec);
    if (ec) {
        throw Error(ErrorKind::data, "io_error",
                    "cannot create directory " + config.out_dir.string() + ": " + ec.message());
    }

    data::save_csv(dataset.records, funds_csv_path(config));
    data::save_sector_returns(dataset.sector_returns, dataset.months, sector_returns_path(config));

    auto docs = data::serialize_corpus(dataset.records);
    std::ofstream corpus(corpus_path(config));
    if (!corpus) {
        throw Error(ErrorKind::data, "io_error",
                    "cannot open " + corpus_path(config).string() + " for writing");
    }
    for (const auto& [doc_id, text] : docs) {
        corpus << nlohmann::json{{"doc_id", doc_id}, {"text", text}}.dump() << "\n";
    }

    return {static_cast<int>(dataset.records.size()), config.dataset.n_funds,
            config.dataset.n_months};
}

IngestResult cmd_ingest(const RunConfig& config) {
    validate_run_config(config);
    const auto path = corpus_path(config);
    std::ifstream file(path);
    if (!file) {
        throw Error(ErrorKind::data, "io_error",
                    "corpus " + path.string() + " not found; run `generate` first");
    }

    std::vector<std::string> ids;
    std::vector<std::string> texts;
    std::string line;
    int line_no = 0;
    while (std::getline(file, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.contains("doc_id") || !j.contains("text")) {
            throw Error(ErrorKind::data, "data_error",
                        path.string() + " line " + std::to_string(line_no) +
                            ": malformed corpus entry");
        }
        ids.push_back(j["doc_id"].get<std::string>());
        texts.push_back(j["text"].get<std::string>());
    }
    if (ids.empty()) {
        throw Error(ErrorKind::data, "data_error", "corpus " + path.string() + " is empty");
    }

    auto embedder = make_embedder(config);
    auto vectors = embedder->embed_batch(texts);

    retrieval::VectorStore store;
    for (size_t i = 0; i < ids.size(); ++i) {
        store.upsert({ids[i], texts[i], std::move(vectors[i])});
    }
    store.save(store_path(config));
    return {store.size()};
}

llm::AllocationRecommendation cmd_recommend(const RunConfig& config, const std::string& fund_id,
                                            const std::string& query) {
    validate_run_config(config);
    if (fund_id.empty()) {
        throw Error(ErrorKind::config, "config_error", "a fund id is required");
    }
    auto store = load_store_or_throw(config);
    auto embedder = make_embedder(config);
    auto provider = make_provider(config);
    const auto sources = effective_sources(config);
    const std::string effective_query = query.empty() ? render_query(config, fund_id) : query;

    auto recs = recommend_for_fund(config, store, *embedder, *provider, {sources.front()},
                                   fund_id, effective_query);
    return recs.front();
}

SweepResult cmd_sweep(const RunConfig& config, const std::string& fund_id,
                      const std::string& model_id) {
    validate_run_config(config);
    auto records = data::load_csv(funds_csv_path(config));
    auto baseline = baseline_for_fund(records, fund_id);
    auto model = market::estimate_model(data::load_sector_returns(sector_returns_path(config)));

    auto store = load_store_or_throw(config);
    auto embedder = make_embedder(config);
    auto provider = make_provider(config);
    const auto sources = effective_sources(config);

    auto recs = recommend_for_fund(config, store, *embedder, *provider, sources, fund_id,
                                   render_query(config, fund_id));
    const llm::AllocationRecommendation* chosen = nullptr;
    for (size_t i = 0; i < recs.size(); ++i) {
        if (recs[i].model_id == model_id || sources[i] == model_id) {
            chosen = &recs[i];
            break;
        }
    }
    if (!chosen) {
        throw Error(ErrorKind::config, "config_error",
                    "model '" + model_id + "' is not among the configured sources");
    }

    auto points = portfolio::sweep(baseline.weights, chosen->weights, model,
                                   constraints_for(config, baseline.risk_level),
                                   config.sweep_grid);

    std::error_code ec;
    std::filesystem::create_directories(config.out_dir, ec);
    const auto path = config.out_dir / eval::sweep_csv_name(fund_id, chosen->model_id);
    eval::write_sweep_csv(points, path);
    return {path, std::move(points)};
}

EvaluateResult cmd_evaluate(const RunConfig& config) {
    validate_run_config(config);
    auto records = data::load_csv(funds_csv_path(config));
    auto model = market::estimate_model(data::load_sector_returns(sector_returns_path(config)));
    auto store = load_store_or_throw(config);
    auto embedder = make_embedder(config);
    auto provider = make_provider(config);
    const auto sources = effective_sources(config);

    std::vector<eval::FundComparison> comparisons;
    std::vector<eval::SweepRecord> sweeps;
    const auto fund_ids = fund_ids_in_order(records);
    for (const auto& fund_id : fund_ids) {
        auto baseline = baseline_for_fund(records, fund_id);
        auto constraints = constraints_for(config, baseline.risk_level);
        auto recs = recommend_for_fund(config, store, *embedder, *provider, sources, fund_id,
                                       render_query(config, fund_id));
        comparisons.push_back(
            eval::build_comparison(fund_id, baseline.weights, recs, model, constraints));
        for (const auto& rec : recs) {
            sweeps.push_back({fund_id, rec.model_id,
                              portfolio::sweep(baseline.weights, rec.weights, model, constraints,
                                               config.sweep_grid)});
        }
    }

    auto files = eval::emit_report(comparisons, sweeps, config.out_dir);

    std::ofstream model_file(config.out_dir / "market_model.json");
    if (model_file) model_file << model.to_json() << "\n";

    return {std::move(files), fund_ids.size(), sources.size()};
}

int run(const std::vector<std::string>& args) {
    CLI::App app{"Retrieval-augmented sector allocation pipeline"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_override;
    std::uint64_t seed_override = 0;
    app.add_option("-c,--config", config_path, "JSON config file");
    auto* out_opt = app.add_option("--out", out_override, "output directory (overrides config)");
    auto* seed_opt = app.add_option("--seed", seed_override, "dataset seed (overrides config)");

    auto* generate = app.add_subcommand("generate", "generate the synthetic fund dataset");
    auto* ingest = app.add_subcommand("ingest", "embed the corpus into the vector store");

    std::string fund_id;
    std::string query;
    std::string model_id;
    auto* recommend = app.add_subcommand("recommend", "produce one allocation recommendation");
    recommend->add_option("--fund", fund_id, "fund id, e.g. FUND_A")->required();
    recommend->add_option("--query", query, "free-form query (defaults to the query template)");
    auto* sweep_cmd = app.add_subcommand("sweep", "blend sweep between baseline and a model");
    sweep_cmd->add_option("--fund", fund_id, "fund id")->required();
    sweep_cmd->add_option("--model", model_id, "model source to sweep against")->required();
    auto* evaluate = app.add_subcommand("evaluate", "full comparison over all funds and sources");

    std::vector<std::string> argv_backward(args.rbegin(), args.rend());
    try {
        app.parse(argv_backward);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        RunConfig config = config_path.empty() ? RunConfig{} : load_config(config_path);
        apply_env_overrides(config);
        if (out_opt->count() > 0) config.out_dir = out_override;
        if (seed_opt->count() > 0) config.dataset.seed = seed_override;

        if (generate->parsed()) {
            auto result = cmd_generate(config);
            std::cerr << "generated " << result.records << " records under "
                      << config.out_dir.string() << "\n";
            std::cout << nlohmann::json{{"records", result.records},
                                        {"funds", result.funds},
                                        {"months", result.months},
                                        {"out_dir", config.out_dir.string()}}
                             .dump()
                      << "\n";
        } else if (ingest->parsed()) {
            auto result = cmd_ingest(config);
            std::cerr << "ingested " << result.documents << " documents\n";
            std::cout << nlohmann::json{{"documents", result.documents},
                                        {"store", store_path(config).string()}}
                             .dump()
                      << "\n";
        } else if (recommend->parsed()) {
            auto rec = cmd_recommend(config, fund_id, query);
            std::cerr << "recommendation for " << fund_id << " from " << rec.model_id << "\n";
            std::cout << rec.to_json() << "\n";
        } else if (sweep_cmd->parsed()) {
            auto result = cmd_sweep(config, fund_id, model_id);
            std::cerr << "sweep written to " << result.csv_path.string() << "\n";
            std::cout << nlohmann::json{{"file", result.csv_path.string()},
                                        {"rows", result.points.size()}}
                             .dump()
                      << "\n";
        } else if (evaluate->parsed()) {
            auto result = cmd_evaluate(config);
            std::cerr << "evaluated " << result.funds << " funds x " << result.sources
                      << " sources\n";
            std::cout << nlohmann::json{
                             {"funds", result.funds},
                             {"sources", result.sources},
                             {"comparison_csv", result.files.comparison_csv.string()},
                             {"report_json", result.files.report_json.string()}}
                             .dump()
                      << "\n";
        }
        return 0;
    } catch (const Error& e) {
        std::cerr << "error [" << error_kind_name(e.kind()) << "] " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace fundalloc::cli
