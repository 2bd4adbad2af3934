#pragma once

#include "dkn/numerics/linalg.hpp"
#include "dkn/numerics/rng.hpp"
#include "dkn/numerics/tolerances.hpp"

#include <cstddef>

namespace dkn {

/// Equicorrelated knockoff diagonal: s_j = min(1, 2·λ_min(corr))·σ_j²·slack.
/// Throws DegenerateCovariance when λ_min(corr) is at or below
/// kTolerances.degenerate_eigen or a variance is not positive.
Vector equicorrelated_s(const Matrix& cov);

/// Gaussian model N(mean, cov) for the covariates together with the
/// conditional law of Gaussian model-X knockoffs,
///   X̃ | X = x ~ N(x − diag{s}·cov⁻¹·(x − mean), 2·diag{s} − diag{s}·cov⁻¹·diag{s}).
/// Immutable after construction and safe to share between workers.
class GaussianModel {
public:
    /// Throws NotPositiveDefinite if cov is not SPD or the conditional
    /// covariance implied by s is not PSD; DimensionMismatch on shape errors.
    GaussianModel(Vector mean, Matrix cov, Vector s);

    /// Model with s from equicorrelated_s(cov).
    static GaussianModel equicorrelated(Vector mean, Matrix cov);

    std::size_t dim() const noexcept { return static_cast<std::size_t>(mean_.size()); }
    const Vector& mean() const noexcept { return mean_; }
    const SpdMatrix& cov() const noexcept { return cov_; }
    const Vector& s() const noexcept { return s_; }
    const Matrix& precision() const noexcept { return precision_; }
    /// cov⁻¹·diag{s}
    const Matrix& cov_inv_s() const noexcept { return cov_inv_s_; }
    const Matrix& cond_cov() const noexcept { return cond_cov_; }
    /// B with B·Bᵀ = cond_cov.
    const Matrix& cond_factor() const noexcept { return cond_factor_; }

private:
    Vector mean_;
    SpdMatrix cov_;
    Vector s_;
    Matrix precision_;
    Matrix cov_inv_s_;
    Matrix cond_cov_;
    Matrix cond_factor_;
};

/// One knockoff copy of X (rows are observations). Rows are drawn
/// independently given X; the response never enters. Normals are consumed
/// row-major from `stream`. Throws DimensionMismatch.
Matrix sample_knockoff_mx(const GaussianModel& model, const Matrix& X, RngStream& stream);

/// Second-order model fitted to X: column means, sample covariance loaded
/// with ridge·(trace/p)·I and rescaled back to the sample variances, and
/// equicorrelated s. Throws DegenerateCovariance for constant columns or a
/// singular loaded covariance, InvalidArgument when n < 2.
GaussianModel second_order_model(const Matrix& X, double ridge = kTolerances.ridge_loading);

} // namespace dkn
