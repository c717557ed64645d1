#include "fundalloc/portfolio.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fundalloc/error.hpp"

namespace fundalloc::portfolio {

namespace {

constexpr double kSimplexTol = 1e-9;

void require_simplex(const std::array<double, kNumSectors>& v) {
    double sum = 0.0;
    for (double x : v) {
        if (!(x >= 0.0)) {
            throw Error(ErrorKind::data, "domain_error",
                        "weight " + std::to_string(x) + " is negative or non-finite");
        }
        sum += x;
    }
    if (std::abs(sum - 1.0) > kSimplexTol) {
        throw Error(ErrorKind::data, "domain_error",
                    "weights sum to " + std::to_string(sum) + ", expected 1 within 1e-9");
    }
}

double quadratic_form(const SectorWeights& w, const market::Matrix4& cov) {
    double q = 0.0;
    for (int i = 0; i < kNumSectors; ++i) {
        for (int j = 0; j < kNumSectors; ++j) {
            q += w[i] * cov(i, j) * w[j];
        }
    }
    return q;
}

}  // namespace

SectorWeights SectorWeights::from_fractions(const std::array<double, kNumSectors>& values) {
    require_simplex(values);
    SectorWeights w;
    w.values_ = values;
    return w;
}

SectorWeights SectorWeights::unchecked(const std::array<double, kNumSectors>& values) {
    SectorWeights w;
    w.values_ = values;
    return w;
}

std::array<double, kNumSectors> SectorWeights::to_percents() const {
    std::array<double, kNumSectors> out{};
    for (int i = 0; i < kNumSectors; ++i) out[i] = values_[i] * 100.0;
    return out;
}

market::Vector4 SectorWeights::as_vector() const {
    return market::Vector4(values_[0], values_[1], values_[2], values_[3]);
}

double default_tau(RiskLevel level) {
    switch (level) {
        case RiskLevel::Low: return 0.10;
        case RiskLevel::Medium: return 0.13;
        case RiskLevel::High: return 0.16;
    }
    return 0.13;
}

SectorWeights normalize(const std::array<double, kNumSectors>& percents) {
    double sum = 0.0;
    for (double p : percents) {
        if (!(p >= 0.0)) {
            throw Error(ErrorKind::data, "domain_error",
                        "negative or non-finite entry " + std::to_string(p));
        }
        sum += p;
    }
    if (sum <= 0.0) {
        throw Error(ErrorKind::data, "domain_error", "entries sum to zero");
    }
    std::array<double, kNumSectors> v{};
    for (int i = 0; i < kNumSectors - 1; ++i) v[i] = percents[i] / sum;
    // Residual on the last component makes the sum exactly 1.
    double rest = 1.0 - (v[0] + v[1] + v[2]);
    v[3] = std::max(rest, 0.0);
    return SectorWeights::unchecked(v);
}

double expected_return(const SectorWeights& w, const market::MarketModel& model) {
    double dot = 0.0;
    for (int i = 0; i < kNumSectors; ++i) dot += w[i] * model.monthly_means()(i);
    return static_cast<double>(market::MarketModel::kPeriodsPerYear) * dot;
}

double volatility(const SectorWeights& w, const market::MarketModel& model) {
    double q = quadratic_form(w, model.monthly_cov());
    if (q < -1e-12) {
        throw Error(ErrorKind::data, "numeric_error",
                    "covariance quadratic form is " + std::to_string(q) + " (broken PSD)");
    }
    q = std::max(q, 0.0);
    return std::sqrt(static_cast<double>(market::MarketModel::kPeriodsPerYear) * q);
}

double sharpe(double annual_return, double annual_volatility, double risk_free_rate) {
    if (!(annual_volatility > 0.0)) {
        throw Error(ErrorKind::data, "degenerate_risk",
                    "volatility must be positive, got " + std::to_string(annual_volatility));
    }
    return (annual_return - risk_free_rate) / annual_volatility;
}

SectorWeights blend(const SectorWeights& w_base, const SectorWeights& w_rec, double lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
        throw Error(ErrorKind::data, "domain_error",
                    "lambda " + std::to_string(lambda) + " outside [0, 1]");
    }
    // Endpoints are returned verbatim, and the base + lambda * diff form keeps
    // a degenerate blend (w_rec == w_base) bit-identical at every lambda.
    if (lambda == 0.0) return w_base;
    if (lambda == 1.0) return w_rec;
    std::array<double, kNumSectors> v{};
    for (int i = 0; i < kNumSectors; ++i) {
        v[i] = w_base[i] + lambda * (w_rec[i] - w_base[i]);
        if (v[i] < 0.0 && v[i] >= -1e-12) v[i] = 0.0;  // round-off dust
    }
    require_simplex(v);  // convexity guarantees this; do not renormalize
    return SectorWeights::unchecked(v);
}

double risk_reduction(double vol_base, double vol) {
    if (!(vol_base > 0.0)) {
        throw Error(ErrorKind::data, "domain_error",
                    "baseline volatility must be positive, got " + std::to_string(vol_base));
    }
    return 100.0 * (vol_base - vol) / vol_base;
}

std::vector<double> default_sweep_grid() {
    std::vector<double> grid(11);
    for (int i = 0; i <= 10; ++i) grid[i] = static_cast<double>(i) / 10.0;
    return grid;
}

std::vector<BlendPoint> sweep(const SectorWeights& w_base, const SectorWeights& w_rec,
                              const market::MarketModel& model, const Constraints& constraints,
                              const std::vector<double>& grid) {
    if (grid.empty()) {
        throw Error(ErrorKind::data, "domain_error", "sweep grid is empty");
    }
    for (size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] >= 0.0 && grid[i] <= 1.0)) {
            throw Error(ErrorKind::data, "domain_error",
                        "grid value " + std::to_string(grid[i]) + " outside [0, 1]");
        }
        if (i > 0 && !(grid[i] > grid[i - 1])) {
            throw Error(ErrorKind::data, "domain_error", "sweep grid must be strictly increasing");
        }
    }

    const double vol_base = volatility(blend(w_base, w_rec, 0.0), model);

    std::vector<BlendPoint> points;
    points.reserve(grid.size());
    for (double lambda : grid) {
        BlendPoint p;
        p.lambda = lambda;
        p.weights = blend(w_base, w_rec, lambda);
        p.annual_return = expected_return(p.weights, model);
        p.annual_volatility = volatility(p.weights, model);
        p.sharpe = sharpe(p.annual_return, p.annual_volatility, constraints.risk_free_rate);
        p.risk_reduction_pct = lambda == 0.0 ? 0.0 : risk_reduction(vol_base, p.annual_volatility);
        points.push_back(std::move(p));
    }
    return points;
}

std::vector<ConstraintViolation> check_constraints(const SectorWeights& w,
                                                   const market::MarketModel& model,
                                                   const Constraints& constraints) {
    std::vector<ConstraintViolation> violations;

    double sum = 0.0;
    for (int i = 0; i < kNumSectors; ++i) {
        if (w[i] < 0.0) {
            violations.push_back({"simplex_nonneg", -w[i],
                                  std::string(sector_name(kSectorOrder[i])) + " weight is negative"});
        }
        sum += w[i];
    }
    if (std::abs(sum - 1.0) > kSimplexTol) {
        violations.push_back({"simplex_sum", std::abs(sum - 1.0),
                              "weights sum to " + std::to_string(sum)});
    }

    if (violations.empty()) {
        double vol = volatility(w, model);
        if (vol > constraints.tau + 1e-12) {
            violations.push_back({"volatility_cap", vol - constraints.tau,
                                  "volatility " + std::to_string(vol) + " exceeds tau " +
                                      std::to_string(constraints.tau)});
        }
    }
    return violations;
}

SectorWeights max_sharpe_grid(const market::MarketModel& model, const Constraints& constraints,
                              int resolution_pct, TieBreak /*tie_break*/) {
    if (resolution_pct <= 0 || 100 % resolution_pct != 0) {
        throw Error(ErrorKind::config, "config_error",
                    "resolution must be a positive divisor of 100, got " +
                        std::to_string(resolution_pct));
    }
    const int steps = 100 / resolution_pct;
    const double step = static_cast<double>(resolution_pct) / 100.0;

    bool found = false;
    double best_score = -std::numeric_limits<double>::infinity();
    std::array<double, kNumSectors> best{};
    double min_vol = std::numeric_limits<double>::infinity();

    // Score with volatility-zero points ranked by the sign of the excess
    // return, so a degenerate riskless point still orders deterministically.
    auto score_of = [&](double excess, double vol) {
        if (vol > 0.0) return excess / vol;
        if (excess > 0.0) return std::numeric_limits<double>::infinity();
        if (excess < 0.0) return -std::numeric_limits<double>::infinity();
        return 0.0;
    };

    for (int a = 0; a <= steps; ++a) {
        for (int b = 0; b + a <= steps; ++b) {
            for (int c = 0; c + b + a <= steps; ++c) {
                const int d = steps - a - b - c;
                std::array<double, kNumSectors> v = {a * step, b * step, c * step, d * step};
                SectorWeights w = SectorWeights::unchecked(v);
                double vol = volatility(w, model);
                min_vol = std::min(min_vol, vol);
                if (vol > constraints.tau + 1e-12) continue;

                double ret = expected_return(w, model);
                double score = score_of(ret - constraints.risk_free_rate, vol);
                if (!found || score > best_score ||
                    (score == best_score && v < best)) {
                    found = true;
                    best_score = score;
                    best = v;
                }
            }
        }
    }

    if (!found) {
        throw Error(ErrorKind::infeasible, "infeasible",
                    "no grid point satisfies tau=" + std::to_string(constraints.tau) +
                        "; minimum achievable volatility is " + std::to_string(min_vol));
    }
    return SectorWeights::unchecked(best);
}

}  // namespace fundalloc::portfolio
