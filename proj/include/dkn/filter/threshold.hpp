#pragma once

#include "dkn/numerics/linalg.hpp"

#include <cstddef>
#include <limits>

namespace dkn {

struct ThresholdResult {
    double t = std::numeric_limits<double>::infinity();
    double offset_c = 1.0;
    double alpha_kn = 0.0;
    bool early_stopped = false;
    std::size_t num_ge = 0;      // #{w_j ≥ t}
    std::size_t num_le_neg = 0;  // #{w_j ≤ −t}

    bool finite() const noexcept { return t < std::numeric_limits<double>::infinity(); }
};

/// Knockoff threshold: the smallest t among the positive magnitudes of w with
/// (c + #{w_j ≤ −t}) / #{w_j ≥ t} ≤ alpha_kn, or +∞ if none qualifies. With
/// early_stop, the scan also halts at the first t where #{w_j ≥ t} < 1/alpha_kn
/// and returns that t with early_stopped set. Throws InvalidArgument for
/// alpha_kn outside (0, 1] or c < 0.
ThresholdResult knockoff_threshold(const Vector& w, double alpha_kn, double c, bool early_stop);

} // namespace dkn
