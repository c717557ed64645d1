#include "fundalloc/market_model.hpp"

#include <nlohmann/json.hpp>

#include <cmath>

#include "fundalloc/error.hpp"

namespace fundalloc::market {

void validate_covariance(const Matrix4& cov, const std::string& label) {
    for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j) {
            if (std::abs(cov(i, j) - cov(j, i)) > 1e-12) {
                throw Error(ErrorKind::data, "data_error",
                            label + " is not symmetric within 1e-12");
            }
        }
        if (!std::isfinite(cov(i, i)) || cov(i, i) < 0.0) {
            throw Error(ErrorKind::data, "data_error",
                        label + " has a negative or non-finite diagonal entry");
        }
    }
    Eigen::SelfAdjointEigenSolver<Matrix4> solver(cov);
    if (solver.info() != Eigen::Success || solver.eigenvalues().minCoeff() < -1e-12) {
        throw Error(ErrorKind::data, "data_error",
                    label + " is not positive semidefinite (eigenvalue tolerance -1e-12)");
    }
}

MarketModel::MarketModel(const Vector4& monthly_means, const Matrix4& monthly_cov)
    : monthly_means_(monthly_means), monthly_cov_(monthly_cov) {
    if (!monthly_means_.allFinite()) {
        throw Error(ErrorKind::data, "data_error", "monthly_means contains a non-finite entry");
    }
    validate_covariance(monthly_cov_, "monthly_cov");
}

std::string MarketModel::to_json() const {
    nlohmann::json j;
    j["monthly_means"] = std::vector<double>(monthly_means_.data(), monthly_means_.data() + 4);
    auto rows = nlohmann::json::array();
    for (int i = 0; i < 4; ++i) {
        rows.push_back(std::vector<double>{monthly_cov_(i, 0), monthly_cov_(i, 1),
                                           monthly_cov_(i, 2), monthly_cov_(i, 3)});
    }
    j["monthly_cov"] = rows;
    j["periods_per_year"] = kPeriodsPerYear;
    return j.dump(2);
}

MarketModel MarketModel::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.contains("monthly_means") || !j.contains("monthly_cov")) {
        throw Error(ErrorKind::data, "data_error", "malformed market model JSON");
    }
    Vector4 means;
    Matrix4 cov;
    const auto& jm = j["monthly_means"];
    const auto& jc = j["monthly_cov"];
    if (jm.size() != 4 || jc.size() != 4) {
        throw Error(ErrorKind::data, "data_error", "market model JSON has wrong dimensions");
    }
    for (int i = 0; i < 4; ++i) {
        means(i) = jm[i].get<double>();
        if (jc[i].size() != 4) {
            throw Error(ErrorKind::data, "data_error", "market model JSON has wrong dimensions");
        }
        for (int k = 0; k < 4; ++k) cov(i, k) = jc[i][k].get<double>();
    }
    return MarketModel(means, cov);
}

MarketModel estimate_model(const ReturnsMatrix& sector_returns, int min_periods) {
    const auto rows = sector_returns.rows();
    if (rows < 2 || rows < min_periods) {
        throw Error(ErrorKind::data, "insufficient_data",
                    "need at least " + std::to_string(min_periods) + " monthly observations, got " +
                        std::to_string(rows));
    }
    if (!sector_returns.allFinite()) {
        throw Error(ErrorKind::data, "data_error", "sector returns contain a non-finite entry");
    }

    Vector4 means = sector_returns.colwise().mean();
    Eigen::MatrixXd centered = sector_returns.rowwise() - means.transpose();
    Matrix4 cov = (centered.transpose() * centered) / static_cast<double>(rows - 1);
    // Symmetrize away the last-bit asymmetry of the matrix product.
    cov = ((cov + cov.transpose()) / 2.0).eval();
    return MarketModel(means, cov);
}

AnnualizedModel annualize(const MarketModel& model) {
    AnnualizedModel out;
    out.means = model.monthly_means() * static_cast<double>(MarketModel::kPeriodsPerYear);
    out.cov = model.monthly_cov() * static_cast<double>(MarketModel::kPeriodsPerYear);
    return out;
}

}  // namespace fundalloc::market
