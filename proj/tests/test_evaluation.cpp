#include "fundalloc/evaluation.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "fundalloc/error.hpp"
#include "test_support.hpp"

using namespace fundalloc;
using eval::FundComparison;
using eval::SweepRecord;
using llm::AllocationRecommendation;

namespace {

AllocationRecommendation make_rec(const std::string& model_id,
                                  const std::array<double, 4>& percents) {
    AllocationRecommendation rec;
    rec.fund_id = "FUND_A";
    rec.model_id = model_id;
    rec.weights = portfolio::normalize(percents);
    rec.raw_text = "{}";
    return rec;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream stream(text);
    std::string line;
    while (std::getline(stream, line)) {
        std::vector<std::string> fields;
        std::string cur;
        for (char c : line) {
            if (c == ',') {
                fields.push_back(cur);
                cur.clear();
            } else {
                cur += c;
            }
        }
        fields.push_back(cur);
        rows.push_back(std::move(fields));
    }
    return rows;
}

}  // namespace

TEST(Improvements, SignAndMagnitude) {
    EXPECT_NEAR(eval::return_improvement(0.10, 0.15), 50.0, 1e-12);
    EXPECT_DOUBLE_EQ(eval::return_improvement(0.10, 0.10), 0.0);
    EXPECT_NEAR(eval::return_improvement(-0.10, -0.05), 50.0, 1e-12);
    EXPECT_THROW(eval::return_improvement(0.0, 0.1), Error);

    EXPECT_NEAR(eval::rar_improvement(1.0, 1.99), 99.0, 1e-9);
    EXPECT_DOUBLE_EQ(eval::rar_improvement(1.5751, 1.5751), 0.0);
    EXPECT_NEAR(eval::rar_improvement(2.0, 1.0), -50.0, 1e-12);
}

TEST(BuildComparison, EmptyRecommendationsKeepBaselineOnly) {
    std::mt19937_64 rng(131);
    auto model = testsupport::random_model(rng);
    auto baseline = portfolio::normalize({40, 30, 20, 10});
    auto cmp = eval::build_comparison("FUND_A", baseline, {}, model, {1.0, 0.0});
    EXPECT_EQ(cmp.fund_id, "FUND_A");
    EXPECT_TRUE(cmp.per_source.empty());
    EXPECT_GT(cmp.baseline_volatility, 0.0);
}

TEST(BuildComparison, BaselineRecommendationIsFixedPoint) {
    std::mt19937_64 rng(137);
    auto model = testsupport::random_model(rng);
    auto baseline = portfolio::normalize({40, 30, 20, 10});
    auto cmp = eval::build_comparison("FUND_A", baseline,
                                      {make_rec("echo", {40, 30, 20, 10})}, model, {1.0, 0.0});
    ASSERT_EQ(cmp.per_source.size(), 1u);
    const auto& m = cmp.per_source.at("echo");
    EXPECT_NEAR(m.return_improvement_pct, 0.0, 1e-9);
    EXPECT_NEAR(m.rar_improvement_pct, 0.0, 1e-9);
}

TEST(BuildComparison, SourcesOrderedByModelIdWithConsistentImprovements) {
    std::mt19937_64 rng(139);
    auto model = testsupport::random_model(rng);
    auto baseline = portfolio::normalize({40, 30, 20, 10});
    auto cmp = eval::build_comparison(
        "FUND_A", baseline,
        {make_rec("zeta", {30, 30, 20, 20}), make_rec("alpha", {25, 25, 25, 25}),
         make_rec("mid", {20, 40, 20, 20})},
        model, {1.0, 0.0});

    ASSERT_EQ(cmp.per_source.size(), 3u);
    std::vector<std::string> order;
    for (const auto& [id, metrics] : cmp.per_source) {
        order.push_back(id);
        EXPECT_NEAR(metrics.return_improvement_pct,
                    eval::return_improvement(cmp.baseline_return, metrics.annual_return), 1e-9);
        EXPECT_NEAR(metrics.rar_improvement_pct,
                    eval::rar_improvement(cmp.baseline_sharpe, metrics.sharpe), 1e-9);
    }
    EXPECT_EQ(order, (std::vector<std::string>{"alpha", "mid", "zeta"}));
}

TEST(BuildComparison, ConstraintViolationsAreAnnotations) {
    std::mt19937_64 rng(149);
    auto model = testsupport::random_model(rng);
    auto baseline = portfolio::normalize({40, 30, 20, 10});
    // A vanishing tau guarantees a volatility violation without failing.
    auto cmp = eval::build_comparison("FUND_A", baseline, {make_rec("m", {25, 25, 25, 25})},
                                      model, {1e-9, 0.0});
    const auto& m = cmp.per_source.at("m");
    ASSERT_EQ(m.violations.size(), 1u);
    EXPECT_NE(m.violations[0].find("volatility_cap"), std::string::npos);
}

TEST(EmitReport, FilesAreByteStableAndWellFormed) {
    std::mt19937_64 rng(151);
    auto model = testsupport::random_model(rng);
    auto baseline = portfolio::normalize({48.63, 19.52, 22.15, 9.70});
    auto rec = make_rec("model-a", {34.12, 25.14, 13.54, 27.20});

    auto cmp = eval::build_comparison("FUND_A", baseline, {rec}, model, {1.0, 0.0});
    SweepRecord sweep{"FUND_A", "model-a",
                      portfolio::sweep(baseline, rec.weights, model, {1.0, 0.0})};

    testsupport::TempDir dir_a;
    testsupport::TempDir dir_b;
    auto files_a = eval::emit_report({cmp}, {sweep}, dir_a.path());
    auto files_b = eval::emit_report({cmp}, {sweep}, dir_b.path());

    // Byte-stable across runs.
    EXPECT_EQ(testsupport::read_file(files_a.comparison_csv),
              testsupport::read_file(files_b.comparison_csv));
    EXPECT_EQ(testsupport::read_file(files_a.report_json),
              testsupport::read_file(files_b.report_json));
    ASSERT_EQ(files_a.sweep_csvs.size(), 1u);
    EXPECT_EQ(files_a.sweep_csvs[0].filename().string(), "sweep_FUND_A_model-a.csv");
    EXPECT_EQ(testsupport::read_file(files_a.sweep_csvs[0]),
              testsupport::read_file(files_b.sweep_csvs[0]));

    // Table-2 style rendering: 34.12% prints as 34.1200.
    const std::string comparison = testsupport::read_file(files_a.comparison_csv);
    EXPECT_NE(comparison.find("34.1200"), std::string::npos);
    EXPECT_NE(comparison.find("FUND_A,original"), std::string::npos);
    EXPECT_NE(comparison.find("FUND_A,model-a"), std::string::npos);
    EXPECT_EQ(comparison.substr(0, comparison.find('\n')),
              "Fund_ID,Source,Technology%,Healthcare%,Finance%,Energy%,Return,Volatility,"
              "Sharpe,Return_Improvement%,RAR_Improvement%");

    // Default grid: header + 11 rows; lambda 0 row ends with exactly 0.0000.
    const std::string sweep_text = testsupport::read_file(files_a.sweep_csvs[0]);
    EXPECT_EQ(sweep_text.substr(0, sweep_text.find('\n')),
              "lambda,return,volatility,sharpe,risk_reduction_pct");
    auto sweep_rows = parse_csv(sweep_text);
    ASSERT_EQ(sweep_rows.size(), 12u);
    EXPECT_EQ(sweep_rows[0][0], "lambda");
    EXPECT_EQ(sweep_rows[1][0], "0.0000");
    EXPECT_EQ(sweep_rows[1][4], "0.0000");
}

// Re-deriving the improvement columns from the absolute columns must agree
// to the 0.01 the 4-decimal rendering allows.
TEST(EmitReport, ComparisonCsvSelfConsistent) {
    std::mt19937_64 rng(157);
    // Means bounded away from zero keep the rounded baseline well-conditioned
    // for the re-derivation (the invariant is rounding-limited).
    market::Vector4 means(0.018, 0.014, 0.011, 0.012);
    market::MarketModel model(means, testsupport::random_psd_cov(rng));
    auto baseline = testsupport::random_weights(rng);
    std::vector<AllocationRecommendation> recs;
    recs.push_back(make_rec("a-model", {30, 30, 20, 20}));
    recs.push_back(make_rec("b-model", {10, 45, 25, 20}));
    auto cmp = eval::build_comparison("FUND_A", baseline, recs, model, {1.0, 0.0});

    testsupport::TempDir dir;
    auto files = eval::emit_report({cmp}, {}, dir.path());
    auto rows = parse_csv(testsupport::read_file(files.comparison_csv));
    ASSERT_GE(rows.size(), 4u);

    double base_return = 0.0, base_sharpe = 0.0;
    for (size_t i = 1; i < rows.size(); ++i) {
        const auto& row = rows[i];
        ASSERT_EQ(row.size(), 11u);
        const double ret = std::stod(row[6]);
        const double sharpe = std::stod(row[8]);
        if (row[1] == "original") {
            base_return = ret;
            base_sharpe = sharpe;
            EXPECT_EQ(row[9], "0.0000");
            EXPECT_EQ(row[10], "0.0000");
        } else {
            const double ret_impr = std::stod(row[9]);
            const double rar_impr = std::stod(row[10]);
            EXPECT_NEAR(ret_impr, eval::return_improvement(base_return, ret), 0.01);
            EXPECT_NEAR(rar_impr, eval::rar_improvement(base_sharpe, sharpe), 0.01);
        }
    }
}

TEST(Report, JsonRoundTripsThroughLoader) {
    std::mt19937_64 rng(163);
    auto model = testsupport::random_model(rng);
    auto baseline = portfolio::normalize({48.63, 19.52, 22.15, 9.70});
    auto rec_a = make_rec("model-a", {34.12, 25.14, 13.54, 27.20});
    auto rec_b = make_rec("model-b", {38.94, 23.38, 15.03, 22.65});

    auto cmp = eval::build_comparison("FUND_A", baseline, {rec_a, rec_b}, model, {1.0, 0.0});
    std::vector<SweepRecord> sweeps{
        {"FUND_A", "model-a", portfolio::sweep(baseline, rec_a.weights, model, {1.0, 0.0})},
        {"FUND_A", "model-b", portfolio::sweep(baseline, rec_b.weights, model, {1.0, 0.0})}};

    testsupport::TempDir dir_a;
    auto files = eval::emit_report({cmp}, sweeps, dir_a.path());

    auto report = eval::load_report(files.report_json);
    ASSERT_EQ(report.comparisons.size(), 1u);
    ASSERT_EQ(report.sweeps.size(), 2u);
    EXPECT_EQ(report.comparisons[0].fund_id, "FUND_A");
    EXPECT_EQ(report.comparisons[0].per_source.size(), 2u);

    // Re-emitting the loaded report reproduces the files byte for byte.
    testsupport::TempDir dir_b;
    auto files_b = eval::emit_report(report.comparisons, report.sweeps, dir_b.path());
    EXPECT_EQ(testsupport::read_file(files.report_json),
              testsupport::read_file(files_b.report_json));
    EXPECT_EQ(testsupport::read_file(files.comparison_csv),
              testsupport::read_file(files_b.comparison_csv));
}

TEST(EmitReport, UnwritableDirectoryFails) {
    auto cmp = FundComparison{};
    cmp.fund_id = "F";
    EXPECT_THROW(eval::emit_report({cmp}, {}, "/proc/definitely/not/writable"), Error);
}
