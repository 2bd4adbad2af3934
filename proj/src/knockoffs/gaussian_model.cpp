#include "dkn/knockoffs/gaussian_model.hpp"

#include "dkn/error.hpp"
#include "dkn/numerics/tolerances.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dkn {

Vector equicorrelated_s(const Matrix& cov)
{
    if (cov.rows() != cov.cols() || cov.rows() == 0) {
        throw Error(Errc::DimensionMismatch, "covariance must be square and non-empty");
    }
    const Vector d = cov.diagonal();
    if ((d.array() <= 0.0).any()) {
        throw Error(Errc::DegenerateCovariance, "covariance has a non-positive variance");
    }
    const Vector inv_sd = d.array().sqrt().inverse();
    const Matrix corr = inv_sd.asDiagonal() * cov * inv_sd.asDiagonal();
    const double lambda_min = min_eigenvalue(corr);
    if (lambda_min <= kTolerances.degenerate_eigen) {
        throw Error(Errc::DegenerateCovariance,
                    "smallest correlation eigenvalue " + std::to_string(lambda_min));
    }
    const double level = std::min(1.0, 2.0 * lambda_min) * kTolerances.equicorrelated_slack;
    return level * d;
}

GaussianModel::GaussianModel(Vector mean, Matrix cov, Vector s)
    : mean_(std::move(mean)), cov_(std::move(cov)), s_(std::move(s))
{
    const auto p = static_cast<Eigen::Index>(cov_.dim());
    if (mean_.size() != p || s_.size() != p) {
        throw Error(Errc::DimensionMismatch, "mean, cov and s must share dimension");
    }
    if ((s_.array() < 0.0).any()) {
        throw Error(Errc::InvalidArgument, "knockoff diagonal s must be nonnegative");
    }
    precision_ = cov_.inverse();
    precision_ = 0.5 * (precision_ + precision_.transpose());
    cov_inv_s_ = precision_ * s_.asDiagonal();
    cond_cov_ = Matrix(s_.asDiagonal()) * 2.0 - s_.asDiagonal() * cov_inv_s_;
    cond_cov_ = 0.5 * (cond_cov_ + cond_cov_.transpose());
    cond_factor_ = psd_factor(cond_cov_);
}

GaussianModel GaussianModel::equicorrelated(Vector mean, Matrix cov)
{
    Vector s = equicorrelated_s(cov);
    return GaussianModel(std::move(mean), std::move(cov), std::move(s));
}

Matrix sample_knockoff_mx(const GaussianModel& model, const Matrix& X, RngStream& stream)
{
    const auto p = static_cast<Eigen::Index>(model.dim());
    if (X.cols() != p) {
        throw Error(Errc::DimensionMismatch, "X has " + std::to_string(X.cols())
                                                 + " columns, model has " + std::to_string(p));
    }
    const Eigen::Index n = X.rows();
    Matrix z(n, p);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < p; ++j) {
            z(i, j) = stream.normal();
        }
    }
    const Matrix centered = X.rowwise() - model.mean().transpose();
    Matrix xt = X - centered * model.cov_inv_s();
    xt.noalias() += z * model.cond_factor().transpose();
    return xt;
}

GaussianModel second_order_model(const Matrix& X, double ridge)
{
    const Eigen::Index n = X.rows();
    const Eigen::Index p = X.cols();
    if (n < 2 || p == 0) {
        throw Error(Errc::InvalidArgument, "second-order model needs n >= 2 and p >= 1");
    }
    const Vector mean = X.colwise().mean().transpose();
    const Matrix centered = X.rowwise() - mean.transpose();
    Matrix cov = (centered.transpose() * centered) / static_cast<double>(n - 1);
    cov = 0.5 * (cov + cov.transpose());

    const Vector var = cov.diagonal();
    const double top = var.maxCoeff();
    for (Eigen::Index j = 0; j < p; ++j) {
        if (!(var(j) > 1e-12 * std::max(top, 1e-300))) {
            throw Error(Errc::DegenerateCovariance, "column " + std::to_string(j) + " has zero variance");
        }
    }
    const double load = ridge * cov.trace() / static_cast<double>(p);
    Matrix loaded = cov;
    loaded.diagonal().array() += load;
    // Rescale so the diagonal returns to the sample variances.
    const Vector factor = (var.array() / loaded.diagonal().array()).sqrt();
    loaded = factor.asDiagonal() * loaded * factor.asDiagonal();
    loaded = 0.5 * (loaded + loaded.transpose());
    loaded.diagonal() = var;
    return GaussianModel::equicorrelated(mean, std::move(loaded));
}

} // namespace dkn
