#include "fundalloc/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "fundalloc/error.hpp"

namespace fundalloc::data {

namespace {

constexpr const char* kCsvHeader =
    "Fund_ID,Date,Average_NAV,Average_Return%,Risk_Level,Technology_Exposure%,"
    "Healthcare_Exposure%,Finance_Exposure%,Energy_Exposure%,Average_Interest_Rate%,"
    "Average_Inflation_Rate%";

constexpr const char* kSidecarHeader = "Date,Technology,Healthcare,Finance,Energy";

std::string fmt(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

double parse_number(const std::string& text, int line_no, const std::string& field) {
    try {
        size_t pos = 0;
        double v = std::stod(text, &pos);
        if (pos != text.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw Error(ErrorKind::data, "csv_parse_error",
                    "line " + std::to_string(line_no) + ": cannot parse " + field + " value '" +
                        text + "'");
    }
}

void validate_record(const FundRecord& r, int line_no) {
    double sum = 0.0;
    for (double e : r.exposures) {
        if (e < 0.0) {
            throw Error(ErrorKind::data, "validation_error",
                        "line " + std::to_string(line_no) + ": negative sector exposure");
        }
        sum += e;
    }
    if (std::abs(sum - 100.0) > 0.01) {
        throw Error(ErrorKind::data, "validation_error",
                    "line " + std::to_string(line_no) + ": exposures sum to " + fmt(sum, 4) +
                        ", expected 100 +/- 0.01");
    }
    if (!(r.average_nav > 0.0)) {
        throw Error(ErrorKind::data, "validation_error",
                    "line " + std::to_string(line_no) + ": Average_NAV must be positive");
    }
}

}  // namespace

market::Matrix4 DatasetConfig::default_cov() {
    // Monthly vols around 3.2-4.4% with mild positive cross-sector correlation.
    market::Matrix4 cov;
    cov << 0.00190, 0.00050, 0.00060, 0.00040,
           0.00050, 0.00120, 0.00040, 0.00030,
           0.00060, 0.00040, 0.00140, 0.00050,
           0.00040, 0.00030, 0.00050, 0.00160;
    return cov;
}

void validate_config(const DatasetConfig& config) {
    if (config.n_funds < 1) {
        throw Error(ErrorKind::config, "config_error", "dataset.n_funds must be >= 1");
    }
    if (config.n_months < 24) {
        throw Error(ErrorKind::config, "config_error",
                    "dataset.n_months must be >= 24, got " + std::to_string(config.n_months));
    }
    if (config.start.month < 1 || config.start.month > 12) {
        throw Error(ErrorKind::config, "config_error", "dataset.start month must be in 1..12");
    }
    for (double m : config.base_monthly_means) {
        if (!std::isfinite(m)) {
            throw Error(ErrorKind::config, "config_error",
                        "dataset.base_monthly_means contains a non-finite entry");
        }
    }
    for (double s : config.macro_sensitivity) {
        if (!std::isfinite(s)) {
            throw Error(ErrorKind::config, "config_error",
                        "dataset.macro_sensitivity contains a non-finite entry");
        }
    }
    for (const auto& [range, name] :
         {std::pair{config.interest_rate_range, "dataset.interest_rate_range"},
          std::pair{config.inflation_rate_range, "dataset.inflation_rate_range"}}) {
        if (!std::isfinite(range[0]) || !std::isfinite(range[1]) || range[0] > range[1]) {
            throw Error(ErrorKind::config, "config_error",
                        std::string(name) + " must be a finite [lo, hi] pair");
        }
    }

    const auto& cov = config.base_monthly_cov;
    for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j) {
            if (std::abs(cov(i, j) - cov(j, i)) > 1e-12) {
                throw Error(ErrorKind::config, "config_error",
                            "dataset.base_monthly_cov is not symmetric within 1e-12");
            }
        }
    }
    Eigen::SelfAdjointEigenSolver<market::Matrix4> solver(cov);
    if (solver.info() != Eigen::Success || solver.eigenvalues().minCoeff() < -1e-12) {
        throw Error(ErrorKind::config, "config_error",
                    "dataset.base_monthly_cov is not positive semidefinite");
    }
}

std::string fund_name(int index) {
    // Bijective base-26 letters: A..Z, AA, AB, ...
    std::string letters;
    int n = index + 1;
    while (n > 0) {
        int r = (n - 1) % 26;
        letters.insert(letters.begin(), static_cast<char>('A' + r));
        n = (n - 1) / 26;
    }
    return "FUND_" + letters;
}

Dataset generate_dataset(const DatasetConfig& config) {
    validate_config(config);

    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> interest_dist(config.interest_rate_range[0],
                                                         config.interest_rate_range[1]);
    std::uniform_real_distribution<double> inflation_dist(config.inflation_rate_range[0],
                                                          config.inflation_rate_range[1]);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::gamma_distribution<double> dirichlet_gamma(2.0, 1.0);
    std::uniform_real_distribution<double> nav_dist(50.0, 500.0);

    // Factor A with A A^T = cov, via the symmetric eigendecomposition so a
    // zero or singular covariance degenerates cleanly to the mean.
    Eigen::SelfAdjointEigenSolver<market::Matrix4> solver(config.base_monthly_cov);
    market::Vector4 eigvals = solver.eigenvalues().cwiseMax(0.0);
    market::Matrix4 factor = solver.eigenvectors() * eigvals.cwiseSqrt().asDiagonal();

    const double interest_mid = (config.interest_rate_range[0] + config.interest_rate_range[1]) / 2.0;
    const double inflation_mid =
        (config.inflation_rate_range[0] + config.inflation_rate_range[1]) / 2.0;

    Dataset out;
    out.sector_returns.resize(config.n_months, 4);
    out.months.reserve(config.n_months);

    std::vector<double> interest(config.n_months);
    std::vector<double> inflation(config.n_months);

    YearMonth ym = config.start;
    for (int t = 0; t < config.n_months; ++t) {
        out.months.push_back(ym);
        ym = ym.next();

        interest[t] = interest_dist(rng);
        inflation[t] = inflation_dist(rng);
        // Macro deviations enter in fractional units so the shift stays in
        // fraction/month territory.
        const double deviation =
            ((interest[t] - interest_mid) + (inflation[t] - inflation_mid)) / 100.0;

        market::Vector4 z;
        for (int s = 0; s < 4; ++s) z(s) = normal(rng);
        market::Vector4 shock = factor * z;
        for (int s = 0; s < 4; ++s) {
            out.sector_returns(t, s) =
                config.base_monthly_means[s] + config.macro_sensitivity[s] * deviation + shock(s);
        }
    }

    struct FundDraw {
        std::array<double, kNumSectors> exposures{};
        double nav0 = 0.0;
    };
    std::vector<FundDraw> funds(config.n_funds);
    for (auto& fund : funds) {
        std::array<double, kNumSectors> raw{};
        double total = 0.0;
        for (double& g : raw) {
            g = dirichlet_gamma(rng);
            total += g;
        }
        double rounded_sum = 0.0;
        for (int s = 0; s < kNumSectors; ++s) {
            fund.exposures[s] = std::round(raw[s] / total * 100.0 * 100.0) / 100.0;
            rounded_sum += fund.exposures[s];
        }
        // Re-balance the largest entry so the percent sum is exactly 100.
        auto largest = std::max_element(fund.exposures.begin(), fund.exposures.end());
        *largest += 100.0 - rounded_sum;
        fund.nav0 = nav_dist(rng);
    }

    out.records.reserve(static_cast<size_t>(config.n_funds) * config.n_months);
    std::vector<std::vector<double>> fund_returns(config.n_funds);
    for (int f = 0; f < config.n_funds; ++f) {
        const auto& fund = funds[f];
        double nav = fund.nav0;
        fund_returns[f].reserve(config.n_months);
        for (int t = 0; t < config.n_months; ++t) {
            double return_pct = 0.0;
            for (int s = 0; s < kNumSectors; ++s) {
                return_pct += fund.exposures[s] * out.sector_returns(t, s);
            }
            fund_returns[f].push_back(return_pct);
            if (t > 0) nav *= std::max(1.0 + return_pct / 100.0, 0.01);

            FundRecord r;
            r.fund_id = fund_name(f);
            r.date = out.months[t];
            r.average_nav = nav;
            r.average_return_pct = return_pct;
            r.exposures = fund.exposures;
            r.average_interest_rate_pct = interest[t];
            r.average_inflation_rate_pct = inflation[t];
            out.records.push_back(std::move(r));
        }
    }

    // Risk levels: terciles of realized per-fund return volatility.
    std::vector<double> vols(config.n_funds);
    for (int f = 0; f < config.n_funds; ++f) {
        const auto& rets = fund_returns[f];
        double mean = std::accumulate(rets.begin(), rets.end(), 0.0) / rets.size();
        double ss = 0.0;
        for (double r : rets) ss += (r - mean) * (r - mean);
        vols[f] = std::sqrt(ss / (rets.size() - 1));
    }
    std::vector<int> order(config.n_funds);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return vols[a] < vols[b]; });
    std::vector<RiskLevel> levels(config.n_funds);
    for (int rank = 0; rank < config.n_funds; ++rank) {
        RiskLevel level = rank < config.n_funds / 3            ? RiskLevel::Low
                          : rank < (2 * config.n_funds) / 3    ? RiskLevel::Medium
                                                               : RiskLevel::High;
        levels[order[rank]] = level;
    }
    for (int f = 0; f < config.n_funds; ++f) {
        for (int t = 0; t < config.n_months; ++t) {
            out.records[static_cast<size_t>(f) * config.n_months + t].risk_level = levels[f];
        }
    }

    return out;
}

std::vector<std::pair<std::string, std::string>> serialize_corpus(
    const std::vector<FundRecord>& records) {
    std::vector<std::pair<std::string, std::string>> docs;
    docs.reserve(records.size());
    for (const auto& r : records) {
        std::string text;
        text += "Fund_ID: " + r.fund_id + "\n";
        text += "Date: " + r.date.to_string() + "\n";
        text += "Average_NAV: " + fmt(r.average_nav, 2) + "\n";
        text += "Average_Return%: " + fmt(r.average_return_pct, 2) + "\n";
        text += "Risk_Level: " + std::string(risk_level_name(r.risk_level)) + "\n";
        for (int s = 0; s < kNumSectors; ++s) {
            text += std::string(sector_name(kSectorOrder[s])) + "_Exposure%: " +
                    fmt(r.exposures[s], 2) + "\n";
        }
        text += "Average_Interest_Rate%: " + fmt(r.average_interest_rate_pct, 2) + "\n";
        text += "Average_Inflation_Rate%: " + fmt(r.average_inflation_rate_pct, 2) + "\n";
        docs.emplace_back(r.fund_id + "/" + r.date.to_string(), std::move(text));
    }
    return docs;
}

void save_csv(const std::vector<FundRecord>& records, const std::filesystem::path& path) {
    std::ofstream file(path);
    if (!file) {
        throw Error(ErrorKind::data, "io_error", "cannot open " + path.string() + " for writing");
    }
    file << kCsvHeader << "\n";
    for (const auto& r : records) {
        file << r.fund_id << ',' << r.date.to_string() << ',' << fmt(r.average_nav, 4) << ','
             << fmt(r.average_return_pct, 4) << ',' << risk_level_name(r.risk_level);
        for (double e : r.exposures) file << ',' << fmt(e, 4);
        file << ',' << fmt(r.average_interest_rate_pct, 4) << ','
             << fmt(r.average_inflation_rate_pct, 4) << "\n";
    }
}

std::vector<FundRecord> load_csv(const std::filesystem::path& path) {
    std::ifstream file(path);
    if (!file) {
        throw Error(ErrorKind::data, "io_error", "cannot open " + path.string());
    }
    std::string line;
    if (!std::getline(file, line)) {
        throw Error(ErrorKind::data, "csv_parse_error", "empty file " + path.string());
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kCsvHeader) {
        const auto expected = split_csv_line(kCsvHeader);
        const auto got = split_csv_line(line);
        for (const auto& col : expected) {
            if (std::find(got.begin(), got.end(), col) == got.end()) {
                throw Error(ErrorKind::data, "csv_parse_error",
                            "header missing column '" + col + "'");
            }
        }
        throw Error(ErrorKind::data, "csv_parse_error", "unexpected header: " + line);
    }

    std::vector<FundRecord> records;
    int line_no = 1;
    while (std::getline(file, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto fields = split_csv_line(line);
        if (fields.size() != 11) {
            throw Error(ErrorKind::data, "csv_parse_error",
                        "line " + std::to_string(line_no) + ": expected 11 fields, got " +
                            std::to_string(fields.size()));
        }
        FundRecord r;
        r.fund_id = fields[0];
        auto date = YearMonth::parse(fields[1]);
        if (!date) {
            throw Error(ErrorKind::data, "csv_parse_error",
                        "line " + std::to_string(line_no) + ": bad date '" + fields[1] + "'");
        }
        r.date = *date;
        r.average_nav = parse_number(fields[2], line_no, "Average_NAV");
        r.average_return_pct = parse_number(fields[3], line_no, "Average_Return%");
        auto level = risk_level_from_name(fields[4]);
        if (!level) {
            throw Error(ErrorKind::data, "csv_parse_error",
                        "line " + std::to_string(line_no) + ": bad risk level '" + fields[4] + "'");
        }
        r.risk_level = *level;
        for (int s = 0; s < kNumSectors; ++s) {
            r.exposures[s] = parse_number(fields[5 + s], line_no, "exposure");
        }
        r.average_interest_rate_pct = parse_number(fields[9], line_no, "Average_Interest_Rate%");
        r.average_inflation_rate_pct = parse_number(fields[10], line_no, "Average_Inflation_Rate%");
        validate_record(r, line_no);
        records.push_back(std::move(r));
    }
    return records;
}

void save_sector_returns(const market::ReturnsMatrix& returns,
                         const std::vector<YearMonth>& months,
                         const std::filesystem::path& path) {
    if (static_cast<size_t>(returns.rows()) != months.size()) {
        throw Error(ErrorKind::data, "data_error", "months/returns row count mismatch");
    }
    std::ofstream file(path);
    if (!file) {
        throw Error(ErrorKind::data, "io_error", "cannot open " + path.string() + " for writing");
    }
    file << kSidecarHeader << "\n";
    for (Eigen::Index t = 0; t < returns.rows(); ++t) {
        file << months[t].to_string();
        for (int s = 0; s < 4; ++s) file << ',' << fmt(returns(t, s), 10);
        file << "\n";
    }
}

market::ReturnsMatrix load_sector_returns(const std::filesystem::path& path) {
    std::ifstream file(path);
    if (!file) {
        throw Error(ErrorKind::data, "io_error", "cannot open " + path.string());
    }
    std::string line;
    if (!std::getline(file, line)) {
        throw Error(ErrorKind::data, "csv_parse_error", "empty file " + path.string());
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kSidecarHeader) {
        throw Error(ErrorKind::data, "csv_parse_error",
                    "unexpected sector returns header: " + line);
    }
    std::vector<std::array<double, 4>> rows;
    int line_no = 1;
    while (std::getline(file, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto fields = split_csv_line(line);
        if (fields.size() != 5) {
            throw Error(ErrorKind::data, "csv_parse_error",
                        "line " + std::to_string(line_no) + ": expected 5 fields");
        }
        std::array<double, 4> row{};
        for (int s = 0; s < 4; ++s) row[s] = parse_number(fields[1 + s], line_no, "return");
        rows.push_back(row);
    }
    market::ReturnsMatrix m(rows.size(), 4);
    for (size_t t = 0; t < rows.size(); ++t) {
        for (int s = 0; s < 4; ++s) m(static_cast<Eigen::Index>(t), s) = rows[t][s];
    }
    return m;
}

}  // namespace fundalloc::data
