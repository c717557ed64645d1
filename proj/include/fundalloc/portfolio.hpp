#pragma once

#include <array>
#include <string>
#include <vector>

#include "fundalloc/market_model.hpp"
#include "fundalloc/types.hpp"

namespace fundalloc::portfolio {

/// Point on the 4-sector probability simplex: w_i >= 0, sum w_i = 1 (1e-9).
class SectorWeights {
public:
    // Validating constructor paths.
    static SectorWeights from_fractions(const std::array<double, kNumSectors>& values);
    // Bypasses validation; for tests constructing deliberately broken vectors
    // and for internal callers that guarantee the invariant.
    static SectorWeights unchecked(const std::array<double, kNumSectors>& values);

    double at(SectorId id) const { return values_[static_cast<int>(id)]; }
    double operator[](int i) const { return values_[i]; }
    const std::array<double, kNumSectors>& values() const { return values_; }

    std::array<double, kNumSectors> to_percents() const;
    market::Vector4 as_vector() const;

    bool operator==(const SectorWeights&) const = default;

private:
    SectorWeights() = default;
    std::array<double, kNumSectors> values_{};
};

struct Constraints {
    double tau = 1.0;             // annualized volatility cap
    double risk_free_rate = 0.0;  // annualized fraction
};

// Default volatility caps keyed by fund risk level.
double default_tau(RiskLevel level);

/// Metrics along the blend path at one exposure ratio.
struct BlendPoint {
    double lambda = 0.0;
    SectorWeights weights = SectorWeights::unchecked({1, 0, 0, 0});
    double annual_return = 0.0;
    double annual_volatility = 0.0;
    double sharpe = 0.0;
    double risk_reduction_pct = 0.0;
};

struct ConstraintViolation {
    std::string constraint;  // "simplex_nonneg" | "simplex_sum" | "volatility_cap"
    double margin = 0.0;     // how far past the bound
    std::string detail;
};

// Rescales non-negative percents to the simplex. The last component is set
// from the residual so the sum is exactly 1. Throws domain_error on a
// negative entry or a zero sum.
SectorWeights normalize(const std::array<double, kNumSectors>& percents);

// 12 * (w . monthly_means).
double expected_return(const SectorWeights& w, const market::MarketModel& model);

// sqrt(12 * w' Sigma w). Quadratic form in [-1e-12, 0) clamps to zero;
// below that throws numeric_error.
double volatility(const SectorWeights& w, const market::MarketModel& model);

// (annual_return - risk_free_rate) / annual_volatility; volatility must be > 0.
double sharpe(double annual_return, double annual_volatility, double risk_free_rate = 0.0);

// (1 - lambda) * base + lambda * rec, lambda in [0, 1]. Convexity keeps the
// result on the simplex; it is asserted, never renormalized.
SectorWeights blend(const SectorWeights& w_base, const SectorWeights& w_rec, double lambda);

// 100 * (vol_base - vol) / vol_base. Negative when risk increased.
double risk_reduction(double vol_base, double vol);

std::vector<double> default_sweep_grid();  // {0.0, 0.1, ..., 1.0}

// One BlendPoint per grid lambda. risk_reduction_pct is measured against the
// lambda = 0 point of this sweep; the lambda = 0 entry is exactly 0.
std::vector<BlendPoint> sweep(const SectorWeights& w_base, const SectorWeights& w_rec,
                              const market::MarketModel& model, const Constraints& constraints,
                              const std::vector<double>& grid = default_sweep_grid());

// Empty iff the simplex invariants hold and volatility(w) <= tau + 1e-12.
std::vector<ConstraintViolation> check_constraints(const SectorWeights& w,
                                                   const market::MarketModel& model,
                                                   const Constraints& constraints);

enum class TieBreak {
    lexicographic_smallest,  // smallest weight vector in canonical sector order
};

// Enumerates every 4-sector composition of 100 at `resolution_pct` steps and
// returns the feasible point with the highest Sharpe ratio. Throws
// infeasible when no grid point satisfies the volatility cap.
SectorWeights max_sharpe_grid(const market::MarketModel& model, const Constraints& constraints,
                              int resolution_pct = 1,
                              TieBreak tie_break = TieBreak::lexicographic_smallest);

}  // namespace fundalloc::portfolio
