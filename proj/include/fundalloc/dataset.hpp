#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "fundalloc/market_model.hpp"
#include "fundalloc/types.hpp"

namespace fundalloc::data {

/// One fund-month observation.
struct FundRecord {
    std::string fund_id;
    YearMonth date;
    double average_nav = 0.0;         // currency units, > 0
    double average_return_pct = 0.0;  // percent per month
    RiskLevel risk_level = RiskLevel::Medium;
    std::array<double, kNumSectors> exposures{};  // percent, sums to 100 +/- 0.01
    double average_interest_rate_pct = 0.0;       // percent per annum
    double average_inflation_rate_pct = 0.0;      // percent per annum
};

struct DatasetConfig {
    std::uint64_t seed = 42;
    int n_funds = 3;
    int n_months = 36;  // >= 24
    YearMonth start{2022, 1};
    // fraction/month, canonical sector order
    std::array<double, kNumSectors> base_monthly_means = {0.018, 0.014, 0.011, 0.012};
    market::Matrix4 base_monthly_cov = default_cov();
    // dimensionless shift coefficients applied to macro deviations
    std::array<double, kNumSectors> macro_sensitivity = {0.5, 0.2, 0.3, 0.4};
    std::array<double, 2> interest_rate_range = {1.0, 6.0};   // percent p.a.
    std::array<double, 2> inflation_rate_range = {2.0, 7.0};  // percent p.a.

    static market::Matrix4 default_cov();
};

// Throws config_error with a `dataset.<field>` path on violation.
void validate_config(const DatasetConfig& config);

struct Dataset {
    std::vector<FundRecord> records;           // fund-major, month-minor order
    market::ReturnsMatrix sector_returns;      // n_months x 4, fraction/month
    std::vector<YearMonth> months;
};

// Deterministic synthetic corpus: monthly sector returns are multivariate
// normal around macro-shifted means; fund exposures are Dirichlet draws
// rounded onto the percent simplex; risk levels split realized fund
// volatility into terciles. Identical config (including seed) yields
// bit-identical output.
Dataset generate_dataset(const DatasetConfig& config);

std::string fund_name(int index);  // 0 -> "FUND_A", 26 -> "FUND_AA", ...

// One retrievable document per (fund_id, date), doc_id "<fund_id>/<YYYY-MM>".
std::vector<std::pair<std::string, std::string>> serialize_corpus(
    const std::vector<FundRecord>& records);

void save_csv(const std::vector<FundRecord>& records, const std::filesystem::path& path);
std::vector<FundRecord> load_csv(const std::filesystem::path& path);

void save_sector_returns(const market::ReturnsMatrix& returns,
                         const std::vector<YearMonth>& months,
                         const std::filesystem::path& path);
market::ReturnsMatrix load_sector_returns(const std::filesystem::path& path);

}  // namespace fundalloc::data
