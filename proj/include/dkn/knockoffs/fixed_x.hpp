#pragma once

#include "dkn/numerics/linalg.hpp"
#include "dkn/numerics/rng.hpp"

#include <cstddef>
#include <optional>

namespace dkn {

/// Fixed design X (n×p, n ≥ 2p) with its Gram matrix Σ = XᵀX and a knockoff
/// diagonal s satisfying 2·diag{s} − diag{s}·Σ⁻¹·diag{s} ⪰ 0.
class FixedXDesign {
public:
    /// s defaults to equicorrelated_s(XᵀX). Throws TooFewRows, RankDeficientX,
    /// NotPositiveDefinite (s violates the PSD condition).
    explicit FixedXDesign(Matrix X, std::optional<Vector> s = std::nullopt);

    std::size_t rows() const noexcept { return static_cast<std::size_t>(x_.rows()); }
    std::size_t cols() const noexcept { return static_cast<std::size_t>(x_.cols()); }
    const Matrix& X() const noexcept { return x_; }
    const Matrix& gram() const noexcept { return gram_; }
    const Vector& s() const noexcept { return s_; }

    /// X·(I − Σ⁻¹·diag{s})
    const Matrix& projected() const noexcept { return projected_; }
    /// (2·diag{s} − diag{s}·Σ⁻¹·diag{s})^{1/2}
    const Matrix& residual_root() const noexcept { return residual_root_; }
    /// Orthonormal basis of col(X), n×p.
    const Matrix& column_basis() const noexcept { return basis_; }

private:
    Matrix x_;
    Matrix gram_;
    Vector s_;
    Matrix projected_;
    Matrix residual_root_;
    Matrix basis_;
};

/// Uniformly random orthonormal n×p matrix U with UᵀX = 0. Redraws on a
/// numerically rank-deficient projection, up to kTolerances.fixed_x_redraws
/// times, then throws RankDeficientX.
Matrix random_orthogonal_complement(const FixedXDesign& design, RngStream& stream);

/// Fixed-X knockoff X̃ = X(I − Σ⁻¹D) − U·(2D − DΣ⁻¹D)^{1/2}, so that
/// X̃ᵀX̃ = Σ and XᵀX̃ = Σ − D exactly up to rounding.
Matrix fixed_x_knockoff(const FixedXDesign& design, RngStream& stream);

} // namespace dkn
