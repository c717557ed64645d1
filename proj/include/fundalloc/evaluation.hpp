#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "fundalloc/llm_gateway.hpp"
#include "fundalloc/portfolio.hpp"

namespace fundalloc::eval {

struct SourceMetrics {
    portfolio::SectorWeights weights = portfolio::SectorWeights::unchecked({0.25, 0.25, 0.25, 0.25});
    double annual_return = 0.0;
    double annual_volatility = 0.0;
    double sharpe = 0.0;
    double return_improvement_pct = 0.0;
    double rar_improvement_pct = 0.0;
    std::vector<std::string> violations;  // constraint annotations, not failures
};

struct FundComparison {
    std::string fund_id;
    portfolio::SectorWeights baseline_weights =
        portfolio::SectorWeights::unchecked({0.25, 0.25, 0.25, 0.25});
    double baseline_return = 0.0;
    double baseline_volatility = 0.0;
    double baseline_sharpe = 0.0;
    std::map<std::string, SourceMetrics> per_source;  // keyed (and ordered) by model_id
};

struct SweepRecord {
    std::string fund_id;
    std::string model_id;
    std::vector<portfolio::BlendPoint> points;
};

// 100 * (new - old) / |old|; the absolute denominator keeps "better" positive
// for negative baselines. old must be nonzero.
double return_improvement(double old_value, double new_value);
double rar_improvement(double old_sharpe, double new_sharpe);

// Evaluates the baseline and every recommendation at full exposure (lambda = 1).
FundComparison build_comparison(const std::string& fund_id,
                                const portfolio::SectorWeights& baseline_weights,
                                const std::vector<llm::AllocationRecommendation>& recommendations,
                                const market::MarketModel& model,
                                const portfolio::Constraints& constraints);

struct ReportFiles {
    std::filesystem::path comparison_csv;
    std::vector<std::filesystem::path> sweep_csvs;
    std::filesystem::path report_json;
};

// Writes comparison.csv, one sweep_<fund>_<model>.csv per sweep, and
// report.json. All floats render with 4 decimals; output is byte-stable for
// fixed inputs.
ReportFiles emit_report(const std::vector<FundComparison>& comparisons,
                        const std::vector<SweepRecord>& sweeps,
                        const std::filesystem::path& out_dir);

void write_sweep_csv(const std::vector<portfolio::BlendPoint>& points,
                     const std::filesystem::path& path);

std::string sweep_csv_name(const std::string& fund_id, const std::string& model_id);

struct Report {
    std::vector<FundComparison> comparisons;
    std::vector<SweepRecord> sweeps;
};

// Parses a report.json written by emit_report.
Report load_report(const std::filesystem::path& path);

}  // namespace fundalloc::eval
