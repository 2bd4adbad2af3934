#pragma once

#include <Eigen/Dense>

#include <cstddef>

namespace dkn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Symmetric positive definite matrix. Construction validates symmetry and a
/// successful Cholesky factorization; the factor is kept alongside.
class SpdMatrix {
public:
    /// Throws NonSymmetric or NotPositiveDefinite.
    explicit SpdMatrix(Matrix a);

    std::size_t dim() const noexcept { return static_cast<std::size_t>(a_.rows()); }
    const Matrix& matrix() const noexcept { return a_; }
    const Matrix& cholesky_factor() const noexcept { return l_; }

    /// a⁻¹·b through the stored factor.
    Matrix solve(const Matrix& b) const;
    Matrix inverse() const;

private:
    Matrix a_;
    Matrix l_;
};

bool is_symmetric(const Matrix& a, double rel_tol);

/// Lower-triangular L with L·Lᵀ = a. Throws NotPositiveDefinite when a pivot
/// is not strictly positive, NonSymmetric for non-square/non-symmetric input.
Matrix cholesky(const Matrix& a);

/// Smallest eigenvalue of a symmetric matrix by bisection on the feasibility
/// of cholesky(a − λI). Throws NonSymmetric.
double min_eigenvalue(const Matrix& a);

/// Symmetric square root of a positive semidefinite matrix. Eigenvalues in
/// [-clip·max|λ|, 0) are treated as zero; more negative ones throw
/// NotPositiveDefinite.
Matrix psd_sqrt(const Matrix& a);

/// A factor B (lower triangular when possible) with B·Bᵀ = a for PSD a.
Matrix psd_factor(const Matrix& a);

/// AR(1) correlation matrix with entries rho^|i-j|.
Matrix ar1_covariance(std::size_t dim, double rho);

} // namespace dkn
