#pragma once

#include "dkn/numerics/linalg.hpp"
#include "dkn/numerics/rng.hpp"
#include "dkn/numerics/tolerances.hpp"

#include <cstddef>
#include <string_view>
#include <vector>

namespace dkn {

enum class Family { gaussian, logistic };

std::string_view to_string(Family family) noexcept;
/// "gaussian" or "logistic"; throws InvalidArgument otherwise.
Family parse_family(std::string_view name);

struct SolverOptions {
    double objective_rel = kTolerances.lasso_objective_rel;
    double kkt = kTolerances.lasso_kkt;
    std::size_t max_iter = kTolerances.lasso_max_iter;
};

struct LassoFit {
    Vector coefficients;
    double intercept = 0.0;
    double lambda = 0.0;
    Family family = Family::gaussian;
    std::size_t iterations = 0;
    bool converged = false;
};

/// Smallest penalty with an all-zero solution: max_j |x_jᵀ(y − ȳ)|/n.
double lambda_max(const Matrix& design, const Vector& y, Family family);

/// Minimizes (1/2n)·loss(y, b0 + Xβ) + λ‖β‖₁ with an unpenalized intercept,
/// where loss is squared error or binomial deviance (y ∈ {0,1}). Columns are
/// used as given. Proximal gradient with momentum, adaptive restart and
/// strong-rule working sets. A point from an exact support solve (Newton
/// steps for the logistic family) replaces the iterates only when its signs
/// and the KKT conditions check out. Throws NonFinite on divergence,
/// DimensionMismatch.
LassoFit fista_lasso(const Matrix& design, const Vector& y, double lambda, Family family,
                     const SolverOptions& options = {});

/// (1/2n)·loss + λ‖β‖₁ at the fit.
double lasso_objective(const Matrix& design, const Vector& y, const LassoFit& fit);

/// Largest violation of the lasso optimality conditions at the fit.
double kkt_residual(const Matrix& design, const Vector& y, const LassoFit& fit);

struct CvOptions {
    std::size_t folds = 10;
    std::size_t grid = 100;
    SolverOptions solver{};
};

struct CvCurve {
    std::vector<double> lambdas;
    std::vector<double> error;
    std::size_t best = 0;
    std::vector<std::size_t> fold_of;
};

/// K-fold cross-validated lasso. Columns are standardized internally (mean 0,
/// population sd 1, recomputed on every training split); a log-spaced grid of
/// `grid` penalties runs from λ_max down to λ_max·ratio, ratio = 1e-4 when
/// n > q and 1e-2 otherwise. Fold labels come from a uniform permutation drawn
/// from `stream`. Returns the full-data refit at the first penalty minimizing
/// CV error (mean squared error or binomial deviance), with coefficients on
/// the original column scale. Throws InvalidArgument when folds < 2 or
/// folds > n.
LassoFit cv_lasso(const Matrix& design, const Vector& y, Family family, const CvOptions& options,
                  RngStream& stream, CvCurve* curve = nullptr);

} // namespace dkn
