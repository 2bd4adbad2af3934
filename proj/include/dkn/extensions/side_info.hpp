#pragma once

#include "dkn/filter/derandomized.hpp"
#include "dkn/filter/evalues.hpp"
#include "dkn/filter/threshold.hpp"

#include <cstddef>
#include <functional>
#include <vector>

namespace dkn {

enum class SideInfoKind { weights, covariates };

/// Side information per feature: positive weights (weighted e-values) or a
/// covariate matrix with one row per feature (adaptive ordering).
struct SideInfo {
    SideInfoKind kind = SideInfoKind::weights;
    Vector u;        // weights, or the first covariate
    Matrix covariates;  // p×r, optional
};

/// e_j = p·u_j·1{w_j ≥ t} / (u_j + Σ_k u_k·1{w_k ≤ −t}). Throws NonPositiveWeight,
/// OffsetTooSmall when thr.offset_c < 1, DimensionMismatch.
EValueVector weighted_evalues(const Vector& w, const ThresholdResult& thr, const SideInfo& side, std::size_t p_dim);

/// What an ordering rule may see: side information, magnitudes |w_j|, the
/// counts |P(k)| and |N(k)|, and signs of already screened features only.
struct MaskedState {
    const SideInfo& side;
    const Vector& magnitude;
    const std::vector<bool>& screened;
    const std::vector<int>& revealed_sign;  // 0 until screened
    std::size_t step = 0;
    std::size_t unscreened_positive = 0;
    std::size_t unscreened_negative = 0;
};

/// Returns the next feature to screen; it must be unscreened.
using OrderingRule = std::function<std::size_t(const MaskedState&)>;

/// Screens the unscreened feature with the smallest side-information score
/// u_j first, breaking ties by smaller |w_j| and then by index.
OrderingRule default_ordering_rule();

struct AdaptiveResult {
    EValueVector e;
    std::size_t stop = 0;               // T
    std::vector<std::size_t> order;     // screening order up to T
};

/// Adaptive e-values: screen features one at a time in the order chosen by
/// `rule`; at step k, P(k) and N(k) are the unscreened features with positive
/// and negative w. T = first k with (1 + |N(k)|)/(|P(k)| ∨ 1) ≤ alpha_kn (T = p
/// if none), and e_j = p·1{j ∈ P(T)}/(1 + |N(T)|). Throws InvalidOrdering when
/// the rule returns a screened or out-of-range index.
AdaptiveResult adaptive_knockoff_evalues(const Vector& w, const SideInfo& side, const OrderingRule& rule,
                                         double alpha_kn, std::size_t p_dim);

/// Derandomized knockoffs with weighted e-values; per-run thresholds follow
/// the options as in aggregate_statistics.
DerandomizedResult aggregate_weighted(const std::vector<ImportanceVector>& statistics, const SideInfo& side,
                                      const DerandomizeOptions& options);

/// Derandomized knockoffs with adaptive e-values.
DerandomizedResult aggregate_adaptive(const std::vector<ImportanceVector>& statistics, const SideInfo& side,
                                      const OrderingRule& rule, const DerandomizeOptions& options);

} // namespace dkn
