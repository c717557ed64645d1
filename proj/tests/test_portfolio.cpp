#include "fundalloc/portfolio.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fundalloc/error.hpp"
#include "test_support.hpp"

using namespace fundalloc;
using portfolio::SectorWeights;

namespace {

market::MarketModel diagonal_model(const market::Vector4& means, double variance) {
    return market::MarketModel(means, market::Matrix4::Identity() * variance);
}

// Independent exhaustive argmax over all 4-part compositions of 100 at
// `step_pct` resolution. Kept deliberately separate from max_sharpe_grid:
// four explicit loops over all counts, Eigen algebra for the metrics.
struct OracleResult {
    std::array<double, 4> weights{};
    long compositions = 0;
    bool feasible = false;
};

OracleResult oracle_max_sharpe(const market::MarketModel& model, double tau, double rf,
                               int step_pct) {
    const int steps = 100 / step_pct;
    const double unit = step_pct / 100.0;
    OracleResult result;
    double best_score = 0.0;
    std::array<double, 4> best{};

    for (int a = 0; a <= steps; ++a) {
        for (int b = 0; b <= steps; ++b) {
            for (int c = 0; c <= steps; ++c) {
                for (int d = 0; d <= steps; ++d) {
                    if (a + b + c + d != steps) continue;
                    ++result.compositions;
                    Eigen::Vector4d w(a * unit, b * unit, c * unit, d * unit);
                    const double var = 12.0 * w.dot(model.monthly_cov() * w);
                    const double vol = std::sqrt(std::max(var, 0.0));
                    if (vol > tau + 1e-12) continue;
                    const double excess = 12.0 * w.dot(model.monthly_means()) - rf;
                    double score;
                    if (vol > 0.0) {
                        score = excess / vol;
                    } else {
                        score = excess > 0.0   ? std::numeric_limits<double>::infinity()
                                : excess < 0.0 ? -std::numeric_limits<double>::infinity()
                                               : 0.0;
                    }
                    std::array<double, 4> cand{w(0), w(1), w(2), w(3)};
                    if (!result.feasible || score > best_score ||
                        (score == best_score && cand < best)) {
                        result.feasible = true;
                        best_score = score;
                        best = cand;
                    }
                }
            }
        }
    }
    result.weights = best;
    return result;
}

}  // namespace

// --- normalize -------------------------------------------------------------

TEST(Normalize, FundAOriginalPercents) {
    auto w = portfolio::normalize({48.63, 19.52, 22.15, 9.70});
    EXPECT_NEAR(w.at(SectorId::Technology), 0.4863, 1e-12);
    EXPECT_NEAR(w.at(SectorId::Healthcare), 0.1952, 1e-12);
    EXPECT_NEAR(w.at(SectorId::Finance), 0.2215, 1e-12);
    EXPECT_NEAR(w.at(SectorId::Energy), 0.0970, 1e-12);
    EXPECT_DOUBLE_EQ(w[0] + w[1] + w[2] + w[3], 1.0);
}

TEST(Normalize, UniformAndSparse) {
    auto uniform = portfolio::normalize({25, 25, 25, 25});
    for (int i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(uniform[i], 0.25);

    auto half = portfolio::normalize({1, 1, 0, 0});
    EXPECT_DOUBLE_EQ(half[0], 0.5);
    EXPECT_DOUBLE_EQ(half[1], 0.5);
    EXPECT_DOUBLE_EQ(half[2], 0.0);
    EXPECT_DOUBLE_EQ(half[3], 0.0);
}

TEST(Normalize, RejectsNegativeAndZeroSum) {
    try {
        portfolio::normalize({-1, 50, 30, 21});
        FAIL() << "expected domain_error";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "domain_error");
    }
    EXPECT_THROW(portfolio::normalize({0, 0, 0, 0}), Error);
}

TEST(SectorWeightsType, RejectsBrokenSimplex) {
    EXPECT_THROW(SectorWeights::from_fractions({0.5, 0.5, 0.5, 0.5}), Error);
    EXPECT_THROW(SectorWeights::from_fractions({-0.1, 0.6, 0.3, 0.2}), Error);
    EXPECT_NO_THROW(SectorWeights::from_fractions({0.25, 0.25, 0.25, 0.25}));
}

// --- expected_return / volatility / sharpe ----------------------------------

TEST(ExpectedReturn, UniformScaling) {
    auto model = diagonal_model(market::Vector4::Constant(0.01), 0.0001);
    auto w = portfolio::normalize({25, 25, 25, 25});
    EXPECT_NEAR(portfolio::expected_return(w, model), 0.12, 1e-15);
}

TEST(ExpectedReturn, BasisVector) {
    auto model = diagonal_model(market::Vector4(0.02, 0.0, 0.0, 0.0), 0.0001);
    auto w = SectorWeights::from_fractions({1, 0, 0, 0});
    EXPECT_NEAR(portfolio::expected_return(w, model), 0.24, 1e-15);
}

TEST(ExpectedReturn, LinearInBlend) {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 50; ++i) {
        auto model = testsupport::random_model(rng);
        auto a = testsupport::random_weights(rng);
        auto b = testsupport::random_weights(rng);
        double mid = portfolio::expected_return(portfolio::blend(a, b, 0.5), model);
        double expected =
            0.5 * (portfolio::expected_return(a, model) + portfolio::expected_return(b, model));
        EXPECT_NEAR(mid, expected, 1e-12);
    }
}

TEST(Volatility, SingleSectorVariance) {
    market::Matrix4 cov = market::Matrix4::Zero();
    cov(0, 0) = 0.0004;
    market::MarketModel model(market::Vector4::Zero(), cov);
    auto w = SectorWeights::from_fractions({1, 0, 0, 0});
    EXPECT_NEAR(portfolio::volatility(w, model), 0.069282, 5e-7);
}

TEST(Volatility, ZeroCovarianceIsZero) {
    market::MarketModel model(market::Vector4::Constant(0.01), market::Matrix4::Zero());
    auto w = portfolio::normalize({10, 20, 30, 40});
    EXPECT_DOUBLE_EQ(portfolio::volatility(w, model), 0.0);
}

// Two-route check: quadratic-form volatility of the estimated model vs the
// annualized sample standard deviation of the projected series.
TEST(Volatility, AgreesWithProjectedSeries) {
    std::mt19937_64 rng(29);
    std::normal_distribution<double> normal(0.008, 0.035);
    for (int trial = 0; trial < 25; ++trial) {
        market::ReturnsMatrix series(36, 4);
        for (int t = 0; t < 36; ++t) {
            for (int s = 0; s < 4; ++s) series(t, s) = normal(rng);
        }
        auto model = market::estimate_model(series);
        auto w = testsupport::random_weights(rng);

        Eigen::VectorXd projected = series * w.as_vector();
        const double mean = projected.mean();
        const double var =
            (projected.array() - mean).square().sum() / static_cast<double>(projected.size() - 1);
        const double direct = std::sqrt(12.0 * var);

        const double viaModel = portfolio::volatility(w, model);
        EXPECT_NEAR(viaModel, direct, 1e-9 * std::max(1.0, std::abs(direct)));
    }
}

TEST(Sharpe, Table3Fixtures) {
    EXPECT_NEAR(portfolio::sharpe(0.2314, 0.1328, 0.0), 1.7425, 5e-4);
    EXPECT_NEAR(portfolio::sharpe(0.2314, 0.1328, 0.0222), 1.5751, 2e-3);
}

TEST(Sharpe, ZeroExcessAndDegenerateRisk) {
    EXPECT_DOUBLE_EQ(portfolio::sharpe(0.03, 0.2, 0.03), 0.0);
    try {
        portfolio::sharpe(0.1, 0.0, 0.0);
        FAIL() << "expected degenerate_risk";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "degenerate_risk");
    }
}

TEST(Sharpe, ScaleInvariance) {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> uniform(0.01, 2.0);
    for (int i = 0; i < 100; ++i) {
        double excess = uniform(rng) - 0.5;
        double vol = uniform(rng);
        double c = uniform(rng) * 3.0;
        double base = portfolio::sharpe(excess, vol, 0.0);
        double scaled = portfolio::sharpe(c * excess, c * vol, 0.0);
        EXPECT_NEAR(base, scaled, 1e-12 * std::max(1.0, std::abs(base)));
    }
}

// --- blend / risk_reduction --------------------------------------------------

TEST(Blend, EndpointsExact) {
    auto base = portfolio::normalize({48.63, 19.52, 22.15, 9.70});
    auto rec = portfolio::normalize({34.12, 25.14, 13.54, 27.20});
    EXPECT_EQ(portfolio::blend(base, rec, 0.0), base);
    EXPECT_EQ(portfolio::blend(base, rec, 1.0), rec);
}

TEST(Blend, Table2Midpoint) {
    auto base = portfolio::normalize({48.63, 19.52, 22.15, 9.70});
    auto rec = portfolio::normalize({34.12, 25.14, 13.54, 27.20});
    auto mid = portfolio::blend(base, rec, 0.5);
    EXPECT_NEAR(mid[0], 0.41375, 1e-12);
    EXPECT_NEAR(mid[1], 0.2233, 1e-12);
    EXPECT_NEAR(mid[2], 0.17845, 1e-12);
    EXPECT_NEAR(mid[3], 0.1845, 1e-12);
}

TEST(Blend, RejectsLambdaOutsideUnitInterval) {
    auto w = portfolio::normalize({25, 25, 25, 25});
    EXPECT_THROW(portfolio::blend(w, w, -0.01), Error);
    EXPECT_THROW(portfolio::blend(w, w, 1.01), Error);
}

// Closure: the blend of two simplex points stays on the simplex.
TEST(Blend, ClosureProperty) {
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> lambda_dist(0.0, 1.0);
    for (int i = 0; i < 10000; ++i) {
        auto a = testsupport::random_weights(rng);
        auto b = testsupport::random_weights(rng);
        auto w = portfolio::blend(a, b, lambda_dist(rng));
        double sum = w[0] + w[1] + w[2] + w[3];
        EXPECT_NEAR(sum, 1.0, 1e-9);
        for (int s = 0; s < 4; ++s) EXPECT_GE(w[s], 0.0);
    }
}

TEST(Blend, VolatilityConvexity) {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> lambda_dist(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        auto model = testsupport::random_model(rng);
        auto a = testsupport::random_weights(rng);
        auto b = testsupport::random_weights(rng);
        double lambda = lambda_dist(rng);
        double mixed = portfolio::volatility(portfolio::blend(a, b, lambda), model);
        double bound =
            std::max(portfolio::volatility(a, model), portfolio::volatility(b, model));
        EXPECT_LE(mixed, bound + 1e-12);
    }
}

TEST(RiskReduction, PaperFixtureAndSigns) {
    EXPECT_NEAR(portfolio::risk_reduction(0.1334, 0.1302), 2.3988, 5e-4);
    EXPECT_DOUBLE_EQ(portfolio::risk_reduction(0.25, 0.25), 0.0);
    EXPECT_NEAR(portfolio::risk_reduction(0.10, 0.12), -20.0, 1e-12);
    EXPECT_THROW(portfolio::risk_reduction(0.0, 0.1), Error);
}

// --- sweep -------------------------------------------------------------------

TEST(Sweep, DegenerateBlendIsFlat) {
    std::mt19937_64 rng(43);
    auto model = testsupport::random_model(rng);
    auto w = testsupport::random_weights(rng);
    auto points = portfolio::sweep(w, w, model, {});
    ASSERT_EQ(points.size(), 11u);
    for (const auto& p : points) {
        EXPECT_EQ(p.weights, w);
        EXPECT_DOUBLE_EQ(p.annual_return, points[0].annual_return);
        EXPECT_DOUBLE_EQ(p.annual_volatility, points[0].annual_volatility);
        EXPECT_DOUBLE_EQ(p.risk_reduction_pct, 0.0);
    }
}

TEST(Sweep, LambdaZeroIndependentOfRecommendation) {
    std::mt19937_64 rng(47);
    auto model = testsupport::random_model(rng);
    auto base = testsupport::random_weights(rng);
    auto rec1 = testsupport::random_weights(rng);
    auto rec2 = testsupport::random_weights(rng);

    auto s1 = portfolio::sweep(base, rec1, model, {});
    auto s2 = portfolio::sweep(base, rec2, model, {});
    EXPECT_EQ(s1[0].weights, s2[0].weights);
    EXPECT_EQ(s1[0].annual_return, s2[0].annual_return);
    EXPECT_EQ(s1[0].annual_volatility, s2[0].annual_volatility);
    EXPECT_EQ(s1[0].sharpe, s2[0].sharpe);
    EXPECT_EQ(s1[0].risk_reduction_pct, 0.0);
}

TEST(Sweep, ReturnsAffineInLambda) {
    std::mt19937_64 rng(53);
    for (int i = 0; i < 20; ++i) {
        auto model = testsupport::random_model(rng);
        auto base = testsupport::random_weights(rng);
        auto rec = testsupport::random_weights(rng);
        auto points = portfolio::sweep(base, rec, model, {});
        const double r0 = points.front().annual_return;
        const double r1 = points.back().annual_return;
        for (const auto& p : points) {
            EXPECT_NEAR(p.annual_return, (1.0 - p.lambda) * r0 + p.lambda * r1, 1e-12);
        }
    }
}

TEST(Sweep, SharpeConsistencyInvariantHolds) {
    std::mt19937_64 rng(59);
    portfolio::Constraints constraints;
    constraints.risk_free_rate = 0.0222;
    auto model = testsupport::random_model(rng);
    auto base = testsupport::random_weights(rng);
    auto rec = testsupport::random_weights(rng);
    for (const auto& p : portfolio::sweep(base, rec, model, constraints)) {
        EXPECT_NEAR(p.sharpe,
                    (p.annual_return - constraints.risk_free_rate) / p.annual_volatility, 1e-9);
    }
}

TEST(Sweep, RejectsBadGrids) {
    std::mt19937_64 rng(61);
    auto model = testsupport::random_model(rng);
    auto w = testsupport::random_weights(rng);
    EXPECT_THROW(portfolio::sweep(w, w, model, {}, {0.5, 0.4}), Error);
    EXPECT_THROW(portfolio::sweep(w, w, model, {}, {-0.1, 0.5}), Error);
    EXPECT_THROW(portfolio::sweep(w, w, model, {}, {0.0, 0.5, 1.2}), Error);
    EXPECT_NO_THROW(portfolio::sweep(w, w, model, {}, {0.25, 0.75}));
}

// --- check_constraints ---------------------------------------------------------

TEST(CheckConstraints, LooseCapPasses) {
    std::mt19937_64 rng(67);
    auto model = testsupport::random_model(rng);
    auto w = portfolio::normalize({25, 25, 25, 25});
    EXPECT_TRUE(portfolio::check_constraints(w, model, {1.0, 0.0}).empty());
}

TEST(CheckConstraints, ZeroTauFlagsVolatility) {
    std::mt19937_64 rng(71);
    auto model = testsupport::random_model(rng);
    auto w = portfolio::normalize({25, 25, 25, 25});
    auto violations = portfolio::check_constraints(w, model, {0.0, 0.0});
    ASSERT_EQ(violations.size(), 1u);
    EXPECT_EQ(violations[0].constraint, "volatility_cap");
    EXPECT_GT(violations[0].margin, 0.0);
}

TEST(CheckConstraints, BrokenSimplexFlagged) {
    std::mt19937_64 rng(73);
    auto model = testsupport::random_model(rng);
    auto w = SectorWeights::unchecked({0.4, 0.3, 0.1, 0.1});  // sums to 0.9
    auto violations = portfolio::check_constraints(w, model, {1.0, 0.0});
    ASSERT_EQ(violations.size(), 1u);
    EXPECT_EQ(violations[0].constraint, "simplex_sum");
}

// --- max_sharpe_grid -------------------------------------------------------------

TEST(MaxSharpeGrid, SymmetricModelPicksUniform) {
    auto model = diagonal_model(market::Vector4::Constant(0.01), 0.001);
    auto w = portfolio::max_sharpe_grid(model, {10.0, 0.0});
    for (int i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(w[i], 0.25);
}

TEST(MaxSharpeGrid, FavorsHigherMeanSector) {
    auto model = diagonal_model(market::Vector4(0.02, 0.01, 0.01, 0.01), 0.001);
    auto w = portfolio::max_sharpe_grid(model, {10.0, 0.0});
    EXPECT_GT(w.at(SectorId::Technology), w.at(SectorId::Healthcare));
    EXPECT_GT(w.at(SectorId::Technology), w.at(SectorId::Finance));
    EXPECT_GT(w.at(SectorId::Technology), w.at(SectorId::Energy));
}

TEST(MaxSharpeGrid, InfeasibleTauReportsMinimum) {
    auto model = diagonal_model(market::Vector4::Constant(0.01), 0.001);
    try {
        portfolio::max_sharpe_grid(model, {1e-6, 0.0});
        FAIL() << "expected infeasible";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "infeasible");
        EXPECT_EQ(e.kind(), ErrorKind::infeasible);
        EXPECT_NE(std::string(e.what()).find("minimum achievable"), std::string::npos);
    }
}

TEST(MaxSharpeGrid, RejectsBadResolution) {
    auto model = diagonal_model(market::Vector4::Constant(0.01), 0.001);
    EXPECT_THROW(portfolio::max_sharpe_grid(model, {1.0, 0.0}, 3), Error);
    EXPECT_THROW(portfolio::max_sharpe_grid(model, {1.0, 0.0}, 0), Error);
}

// Coarse-grid agreement with the independent enumeration oracle; the full
// 1% sweep runs in the acceptance suite.
TEST(MaxSharpeGrid, MatchesOracleAtCoarseResolution) {
    std::mt19937_64 rng(79);
    for (int trial = 0; trial < 25; ++trial) {
        auto model = testsupport::random_model(rng);
        auto w = portfolio::max_sharpe_grid(model, {10.0, 0.0}, 5);
        auto oracle = oracle_max_sharpe(model, 10.0, 0.0, 5);
        ASSERT_TRUE(oracle.feasible);
        EXPECT_EQ(oracle.compositions, 1771);  // C(23, 3)
        for (int i = 0; i < 4; ++i) EXPECT_EQ(w[i], oracle.weights[i]);
    }
}

TEST(MaxSharpeGrid, RespectsTightTau) {
    std::mt19937_64 rng(83);
    for (int trial = 0; trial < 10; ++trial) {
        auto model = testsupport::random_model(rng);
        // A cap 20% above the grid's minimum-variance point keeps the
        // feasible set non-empty but binding.
        double min_vol = 1e9;
        for (int a = 0; a <= 20; ++a) {
            for (int b = 0; a + b <= 20; ++b) {
                for (int c = 0; a + b + c <= 20; ++c) {
                    Eigen::Vector4d w(a * 0.05, b * 0.05, c * 0.05, (20 - a - b - c) * 0.05);
                    min_vol = std::min(
                        min_vol, std::sqrt(12.0 * w.dot(model.monthly_cov() * w)));
                }
            }
        }
        const double tau = min_vol * 1.2;
        auto w = portfolio::max_sharpe_grid(model, {tau, 0.0}, 5);
        EXPECT_LE(portfolio::volatility(w, model), tau + 1e-12);
        auto oracle = oracle_max_sharpe(model, tau, 0.0, 5);
        for (int i = 0; i < 4; ++i) EXPECT_EQ(w[i], oracle.weights[i]);
    }
}
