#pragma once

#include "dkn/filter/threshold.hpp"
#include "dkn/numerics/linalg.hpp"

#include <cstddef>
#include <string>

namespace dkn {

/// Nonnegative evidence per feature. `p_dim` is the number of hypotheses used
/// by e-BH; `source` records how the values were produced.
struct EValueVector {
    Vector e;
    std::size_t p_dim = 0;
    std::string source;
};

/// e_j = p_dim·1{w_j ≥ t} / (1 + #{w_k ≤ −t}); all zero when t = +∞.
/// Throws OffsetTooSmall when thr.offset_c < 1.
EValueVector knockoff_evalues(const Vector& w, const ThresholdResult& thr, std::size_t p_dim);

struct HeatmapEValues {
    EValueVector values;
    bool valid = false;  // thr.offset_c ≥ 1
};

/// e-values for offset sweeps: denominator max(c, 1) + #{w_k ≤ −t}. The
/// relaxed e-value guarantee is only claimed when c ≥ 1.
HeatmapEValues heatmap_evalues(const Vector& w, const ThresholdResult& thr, std::size_t p_dim);

} // namespace dkn
