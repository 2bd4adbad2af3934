#pragma once

#include "dkn/stats/lasso.hpp"

#include <cstddef>
#include <vector>

namespace dkn::detail {

/// Path solver for ½βᵀGβ − cᵀβ + λ‖β‖₁. Successive solve() calls warm start
/// from the previous solution. All sums run in a fixed index order, so two
/// bit-identical columns keep bit-identical coefficients.
class QuadraticPath {
public:
    QuadraticPath(const Matrix& gram, const Vector& c, const SolverOptions& options);

    void solve(double lambda);

    const Vector& beta() const noexcept { return beta_; }
    std::size_t iterations() const noexcept { return iterations_; }
    bool converged() const noexcept { return converged_; }

private:
    void refresh_gradient();
    bool solve_restricted(const std::vector<Eigen::Index>& set, double lambda);

    const Matrix& g_;
    const Vector& c_;
    SolverOptions options_;
    Vector beta_;
    Vector gbeta_;
    double last_lambda_;
    double step_l_ = 1.0;
    std::size_t iterations_ = 0;
    bool converged_ = true;
};

/// Path solver for (1/n)·Σ[log(1 + e^η) − yη] + λ‖β‖₁ with η = b0 + Zβ.
class LogisticPath {
public:
    LogisticPath(const Matrix& z, const Vector& y, const SolverOptions& options);

    void solve(double lambda);

    const Vector& beta() const noexcept { return beta_; }
    double intercept() const noexcept { return b0_; }
    /// Mean binomial deviance at the current solution.
    double deviance() const;
    double null_deviance() const noexcept { return null_deviance_; }
    std::size_t iterations() const noexcept { return iterations_; }
    bool converged() const noexcept { return converged_; }

private:
    void refresh_gradient();
    bool solve_restricted(const std::vector<Eigen::Index>& set, double lambda);

    const Matrix& z_;
    const Vector& y_;
    SolverOptions options_;
    Vector beta_;
    double b0_;
    Vector eta_;
    Vector grad_;
    double null_deviance_;
    double last_lambda_;
    double step_l_;
    std::size_t iterations_ = 0;
    bool converged_ = true;
};

/// x·y accumulated left to right.
double ordered_dot(const double* x, const double* y, Eigen::Index n) noexcept;

/// Gram matrix AᵀA/scale by ordered dot products.
Matrix ordered_gram(const Matrix& a, double scale);

double soft_threshold(double v, double t) noexcept;

/// Numerically stable log(1 + e^x).
double log1pexp(double x) noexcept;

} // namespace dkn::detail
