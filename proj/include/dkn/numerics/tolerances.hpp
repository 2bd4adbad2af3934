#pragma once

#include <cstddef>

namespace dkn {

/// Numerical constants shared by every module. Kept in one record so that
/// tests and tools report the same values the library enforces.
struct Tolerances {
    // linear algebra
    double symmetry_rel = 1e-12;
    double cholesky_reconstruction_rel = 1e-10;
    double eigen_bisection_rel = 1e-10;
    std::size_t eigen_bisection_max_iter = 200;

    // knockoff construction
    double equicorrelated_slack = 0.999;
    double degenerate_eigen = 1e-10;
    double ridge_loading = 1e-6;
    double gram_identity_abs = 1e-8;
    double psd_clip_rel = 1e-10;
    std::size_t fixed_x_redraws = 3;

    // lasso solver
    double lasso_objective_rel = 1e-7;
    double lasso_kkt = 1e-6;
    std::size_t lasso_max_iter = 10000;

    // threshold / e-BH comparisons of the form a <= b
    double ratio_rel = 1e-12;
};

inline constexpr Tolerances kTolerances{};

/// a <= b, allowing relative slack `kTolerances.ratio_rel` on b.
inline bool leq_rel(double a, double b) noexcept
{
    return a <= b + kTolerances.ratio_rel * (b < 0 ? -b : b);
}

} // namespace dkn
