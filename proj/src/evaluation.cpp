#include "fundalloc/evaluation.hpp"

#include <nlohmann/json.hpp>

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "fundalloc/error.hpp"

namespace fundalloc::eval {

namespace {

std::string fmt4(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

double round4(double v) { return std::round(v * 1e4) / 1e4; }

nlohmann::json weights_pct_json(const portfolio::SectorWeights& w) {
    nlohmann::json j;
    for (int i = 0; i < kNumSectors; ++i) {
        j[sector_name(kSectorOrder[i])] = round4(w[i] * 100.0);
    }
    return j;
}

// Restores weights at the rendered precision; no renormalization, so a
// loaded report re-emits byte-identically.
portfolio::SectorWeights weights_from_pct_json(const nlohmann::json& j) {
    std::array<double, kNumSectors> fractions{};
    for (int i = 0; i < kNumSectors; ++i) {
        fractions[i] = j.at(sector_name(kSectorOrder[i])).get<double>() / 100.0;
    }
    return portfolio::SectorWeights::unchecked(fractions);
}

constexpr const char* kComparisonHeader =
    "Fund_ID,Source,Technology%,Healthcare%,Finance%,Energy%,Return,Volatility,Sharpe,"
    "Return_Improvement%,RAR_Improvement%";

// Rendered improvements are re-derived from the rounded absolute cells so
// the emitted file is self-consistent at its own precision.
double rendered_improvement(double old_value, double new_value) {
    const double old_r = round4(old_value);
    const double new_r = round4(new_value);
    if (old_r == 0.0) return 0.0;
    return round4(100.0 * (new_r - old_r) / std::abs(old_r));
}

void write_comparison_row(std::ofstream& file, const std::string& fund_id,
                          const std::string& source, const portfolio::SectorWeights& w,
                          double ret, double vol, double sharpe, double ret_impr,
                          double rar_impr) {
    file << fund_id << ',' << source;
    for (int i = 0; i < kNumSectors; ++i) file << ',' << fmt4(w[i] * 100.0);
    file << ',' << fmt4(ret) << ',' << fmt4(vol) << ',' << fmt4(sharpe) << ',' << fmt4(ret_impr)
         << ',' << fmt4(rar_impr) << "\n";
}

}  // namespace

double return_improvement(double old_value, double new_value) {
    if (old_value == 0.0) {
        throw Error(ErrorKind::data, "domain_error",
                    "improvement is undefined for a zero baseline");
    }
    return 100.0 * (new_value - old_value) / std::abs(old_value);
}

double rar_improvement(double old_sharpe, double new_sharpe) {
    return return_improvement(old_sharpe, new_sharpe);
}

FundComparison build_comparison(const std::string& fund_id,
                                const portfolio::SectorWeights& baseline_weights,
                                const std::vector<llm::AllocationRecommendation>& recommendations,
                                const market::MarketModel& model,
                                const portfolio::Constraints& constraints) {
    FundComparison cmp;
    cmp.fund_id = fund_id;
    cmp.baseline_weights = baseline_weights;
    cmp.baseline_return = portfolio::expected_return(baseline_weights, model);
    cmp.baseline_volatility = portfolio::volatility(baseline_weights, model);
    cmp.baseline_sharpe = portfolio::sharpe(cmp.baseline_return, cmp.baseline_volatility,
                                            constraints.risk_free_rate);

    for (const auto& rec : recommendations) {
        SourceMetrics m;
        m.weights = rec.weights;
        m.annual_return = portfolio::expected_return(rec.weights, model);
        m.annual_volatility = portfolio::volatility(rec.weights, model);
        m.sharpe =
            portfolio::sharpe(m.annual_return, m.annual_volatility, constraints.risk_free_rate);
        m.return_improvement_pct = return_improvement(cmp.baseline_return, m.annual_return);
        m.rar_improvement_pct = rar_improvement(cmp.baseline_sharpe, m.sharpe);
        for (const auto& v : portfolio::check_constraints(rec.weights, model, constraints)) {
            m.violations.push_back(v.constraint + ": " + v.detail);
        }
        cmp.per_source[rec.model_id] = std::move(m);
    }
    return cmp;
}

std::string sweep_csv_name(const std::string& fund_id, const std::string& model_id) {
    auto sanitize = [](const std::string& s) {
        std::string out;
        for (char c : s) {
            out += (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-' ||
                    c == '_')
                       ? c
                       : '_';
        }
        return out;
    };
    return "sweep_" + sanitize(fund_id) + "_" + sanitize(model_id) + ".csv";
}

void write_sweep_csv(const std::vector<portfolio::BlendPoint>& points,
                     const std::filesystem::path& path) {
    std::ofstream file(path);
    if (!file) {
        throw Error(ErrorKind::data, "io_error", "cannot open " + path.string() + " for writing");
    }
    file << "lambda,return,volatility,sharpe,risk_reduction_pct\n";
    for (const auto& p : points) {
        file << fmt4(p.lambda) << ',' << fmt4(p.annual_return) << ',' << fmt4(p.annual_volatility)
             << ',' << fmt4(p.sharpe) << ',' << fmt4(p.risk_reduction_pct) << "\n";
    }
}

ReportFiles emit_report(const std::vector<FundComparison>& comparisons,
                        const std::vector<SweepRecord>& sweeps,
                        const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        throw Error(ErrorKind::data, "io_error",
                    "cannot create directory " + out_dir.string() + ": " + ec.message());
    }

    ReportFiles files;
    files.comparison_csv = out_dir / "comparison.csv";
    {
        std::ofstream file(files.comparison_csv);
        if (!file) {
            throw Error(ErrorKind::data, "io_error",
                        "cannot open " + files.comparison_csv.string() + " for writing");
        }
        file << kComparisonHeader << "\n";
        for (const auto& cmp : comparisons) {
            write_comparison_row(file, cmp.fund_id, "original", cmp.baseline_weights,
                                 cmp.baseline_return, cmp.baseline_volatility,
                                 cmp.baseline_sharpe, 0.0, 0.0);
            for (const auto& [model_id, m] : cmp.per_source) {
                write_comparison_row(file, cmp.fund_id, model_id, m.weights, m.annual_return,
                                     m.annual_volatility, m.sharpe,
                                     rendered_improvement(cmp.baseline_return, m.annual_return),
                                     rendered_improvement(cmp.baseline_sharpe, m.sharpe));
            }
        }
    }

    nlohmann::json report;
    report["funds"] = nlohmann::json::array();
    for (const auto& cmp : comparisons) {
        nlohmann::json fund;
        fund["fund_id"] = cmp.fund_id;
        fund["baseline"] = {{"weights_pct", weights_pct_json(cmp.baseline_weights)},
                            {"return", round4(cmp.baseline_return)},
                            {"volatility", round4(cmp.baseline_volatility)},
                            {"sharpe", round4(cmp.baseline_sharpe)}};
        fund["sources"] = nlohmann::json::array();
        for (const auto& [model_id, m] : cmp.per_source) {
            fund["sources"].push_back(
                {{"model_id", model_id},
                 {"weights_pct", weights_pct_json(m.weights)},
                 {"return", round4(m.annual_return)},
                 {"volatility", round4(m.annual_volatility)},
                 {"sharpe", round4(m.sharpe)},
                 {"return_improvement_pct",
                  rendered_improvement(cmp.baseline_return, m.annual_return)},
                 {"rar_improvement_pct", rendered_improvement(cmp.baseline_sharpe, m.sharpe)},
                 {"violations", m.violations}});
        }
        report["funds"].push_back(std::move(fund));
    }

    report["sweeps"] = nlohmann::json::array();
    for (const auto& sweep : sweeps) {
        const auto name = sweep_csv_name(sweep.fund_id, sweep.model_id);
        files.sweep_csvs.push_back(out_dir / name);
        write_sweep_csv(sweep.points, out_dir / name);

        nlohmann::json js;
        js["fund_id"] = sweep.fund_id;
        js["model_id"] = sweep.model_id;
        js["points"] = nlohmann::json::array();
        for (const auto& p : sweep.points) {
            js["points"].push_back({{"lambda", round4(p.lambda)},
                                    {"weights_pct", weights_pct_json(p.weights)},
                                    {"return", round4(p.annual_return)},
                                    {"volatility", round4(p.annual_volatility)},
                                    {"sharpe", round4(p.sharpe)},
                                    {"risk_reduction_pct", round4(p.risk_reduction_pct)}});
        }
        report["sweeps"].push_back(std::move(js));
    }

    files.report_json = out_dir / "report.json";
    std::ofstream file(files.report_json);
    if (!file) {
        throw Error(ErrorKind::data, "io_error",
                    "cannot open " + files.report_json.string() + " for writing");
    }
    file << report.dump(2) << "\n";
    return files;
}

Report load_report(const std::filesystem::path& path) {
    std::ifstream file(path);
    if (!file) {
        throw Error(ErrorKind::data, "io_error", "cannot open " + path.string());
    }
    nlohmann::json j = nlohmann::json::parse(file, nullptr, false);
    if (j.is_discarded() || !j.contains("funds") || !j.contains("sweeps")) {
        throw Error(ErrorKind::data, "data_error", "malformed report JSON in " + path.string());
    }

    Report report;
    for (const auto& fund : j["funds"]) {
        FundComparison cmp;
        cmp.fund_id = fund.at("fund_id").get<std::string>();
        const auto& base = fund.at("baseline");
        cmp.baseline_weights = weights_from_pct_json(base.at("weights_pct"));
        cmp.baseline_return = base.at("return").get<double>();
        cmp.baseline_volatility = base.at("volatility").get<double>();
        cmp.baseline_sharpe = base.at("sharpe").get<double>();
        for (const auto& src : fund.at("sources")) {
            SourceMetrics m;
            m.weights = weights_from_pct_json(src.at("weights_pct"));
            m.annual_return = src.at("return").get<double>();
            m.annual_volatility = src.at("volatility").get<double>();
            m.sharpe = src.at("sharpe").get<double>();
            m.return_improvement_pct = src.at("return_improvement_pct").get<double>();
            m.rar_improvement_pct = src.at("rar_improvement_pct").get<double>();
            m.violations = src.at("violations").get<std::vector<std::string>>();
            cmp.per_source[src.at("model_id").get<std::string>()] = std::move(m);
        }
        report.comparisons.push_back(std::move(cmp));
    }
    for (const auto& js : j["sweeps"]) {
        SweepRecord sweep;
        sweep.fund_id = js.at("fund_id").get<std::string>();
        sweep.model_id = js.at("model_id").get<std::string>();
        for (const auto& jp : js.at("points")) {
            portfolio::BlendPoint p;
            p.lambda = jp.at("lambda").get<double>();
            p.weights = weights_from_pct_json(jp.at("weights_pct"));
            p.annual_return = jp.at("return").get<double>();
            p.annual_volatility = jp.at("volatility").get<double>();
            p.sharpe = jp.at("sharpe").get<double>();
            p.risk_reduction_pct = jp.at("risk_reduction_pct").get<double>();
            sweep.points.push_back(std::move(p));
        }
        report.sweeps.push_back(std::move(sweep));
    }
    return report;
}

}  // namespace fundalloc::eval
