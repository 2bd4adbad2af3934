#pragma once

#include "dkn/filter/derandomized.hpp"
#include "dkn/knockoffs/fixed_x.hpp"
#include "dkn/stats/importance.hpp"

#include <cstddef>
#include <cstdint>

namespace dkn {

/// Derandomized fixed-X knockoffs: each run draws a fresh orthogonal
/// complement U^{(m)} and hence a fresh X̃^{(m)}; thresholds, e-values,
/// averaging and e-BH follow aggregate_statistics.
DerandomizedResult derandomized_fixed_x(const FixedXDesign& design, const Vector& y,
                                        const Statistic& statistic, const DerandomizeOptions& options);

/// The knockoff copy used by run m of derandomized_fixed_x.
Matrix run_knockoff_fixed_x(const FixedXDesign& design, std::uint64_t master_seed, std::size_t m);

} // namespace dkn
