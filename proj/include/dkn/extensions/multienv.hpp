#pragma once

#include "dkn/filter/derandomized.hpp"
#include "dkn/knockoffs/gaussian_model.hpp"
#include "dkn/numerics/rng.hpp"
#include "dkn/stats/importance.hpp"

#include <cstddef>
#include <vector>

namespace dkn {

/// Per-environment statistics stacked as rows: w(e, j) = W_j^e.
struct MultiEnvStatistics {
    Matrix w;

    std::size_t env_count() const noexcept { return static_cast<std::size_t>(w.rows()); }
};

/// Consistency statistic W_j = min_e sign(W_j^e) · Π_e |W_j^e|, with sign(0) = 0.
ImportanceVector multienv_statistic_cst(const MultiEnvStatistics& s);

/// Partial-consistency statistic for "association in at least r environments":
/// W_j = sign(1/2 − p_j) · (product of the r smallest |W_j^e|), where
/// p_j = Ψ(n⁻ − 1, m, 1/2) + U_j·ψ(n⁻, m, 1/2), m = (E − r + 1 − n⁰) ∨ 0, n⁻ and
/// n⁰ count negative and zero entries of column j, and U_1..U_p are drawn in
/// order from `stream`. Throws InvalidArgument unless 1 ≤ r ≤ E.
ImportanceVector multienv_statistic_pcst(const MultiEnvStatistics& s, std::size_t r, RngStream& stream);

enum class MekfMode { cst, pcst };

struct Environment {
    Matrix X;
    Vector y;
    GaussianModel model;
};

struct MekfOptions {
    MekfMode mode = MekfMode::cst;
    std::size_t r = 1;
    DerandomizeOptions derandomize{};
};

/// Derandomized multi-environment knockoff filter. Run m samples a knockoff
/// copy in every environment e from the run's environment-e substream,
/// stacks the per-environment statistics, collapses them with the chosen
/// statistic and aggregates as in aggregate_statistics. With one environment
/// and cst mode the result equals derandomized_knockoffs. Throws
/// EnvDimensionMismatch when environments disagree on p.
DerandomizedResult derandomized_mekf(const std::vector<Environment>& envs, const Statistic& statistic,
                                     const MekfOptions& options);

} // namespace dkn
