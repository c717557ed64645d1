#pragma once

#include <Eigen/Dense>
#include <string>

#include "fundalloc/types.hpp"

namespace fundalloc::market {

using Vector4 = Eigen::Vector4d;
using Matrix4 = Eigen::Matrix4d;
using ReturnsMatrix = Eigen::Matrix<double, Eigen::Dynamic, 4>;

/**
 * Monthly return/risk model for the four sectors.
 *
 * monthly_means and monthly_cov are in fraction/month and fraction^2/month,
 * indexed in canonical sector order. Annualization is linear in both the
 * mean and the variance (i.i.d. monthly returns), with 12 periods per year.
 *
 * Immutable after construction; the constructor validates symmetry
 * (within 1e-12) and positive semidefiniteness (eigenvalues >= -1e-12).
 */
class MarketModel {
public:
    static constexpr int kPeriodsPerYear = 12;

    MarketModel(const Vector4& monthly_means, const Matrix4& monthly_cov);

    const Vector4& monthly_means() const { return monthly_means_; }
    const Matrix4& monthly_cov() const { return monthly_cov_; }
    int periods_per_year() const { return kPeriodsPerYear; }

    std::string to_json() const;
    static MarketModel from_json(const std::string& text);

private:
    Vector4 monthly_means_;
    Matrix4 monthly_cov_;
};

// Validates symmetry/PSD of a covariance matrix; throws Error(data) with the
// given field label in the message on violation.
void validate_covariance(const Matrix4& cov, const std::string& label);

// Column sample means and unbiased sample covariance (divisor T-1) of a
// T x 4 monthly return series. Throws insufficient_data when T < min_periods
// and data_error on non-finite entries. min_periods exists so unit tests can
// exercise the estimator on tiny hand-checkable series.
MarketModel estimate_model(const ReturnsMatrix& sector_returns, int min_periods = 24);

struct AnnualizedModel {
    Vector4 means;
    Matrix4 cov;
};

// Linear scaling: means * 12, cov * 12.
AnnualizedModel annualize(const MarketModel& model);

}  // namespace fundalloc::market
