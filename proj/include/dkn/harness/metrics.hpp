#pragma once

#include "dkn/harness/data.hpp"

#include <cstddef>
#include <vector>

namespace dkn {

using Selection = std::vector<std::size_t>;
/// selections[d][k] is the set chosen on dataset d, rerun k.
using SelectionTable = std::vector<std::vector<Selection>>;

struct SelectionScore {
    double power = 0.0;  // |S ∩ H1| / |H1|
    double fdp = 0.0;    // |S ∩ H0| / (|S| ∨ 1)
};

SelectionScore score_selection(const Selection& selected, const ExperimentTruth& truth);

struct Variability {
    double marginal = 0.0;
    double conditional = 0.0;
};

/// Marginal: Σ_j p̂_j(1−p̂_j) / [p·(ŝ/p)(1−ŝ/p)] over all (d, k).
/// Conditional: Σ_d Σ_j p̂_{j,d}(1−p̂_{j,d}) / Σ_d p·(ŝ_d/p)(1−ŝ_d/p).
/// A zero denominator gives 0. Throws InvalidArgument on an empty or ragged
/// table or an index ≥ p.
Variability selection_variability(const SelectionTable& table, std::size_t p);

/// Π_j = fraction of the given selections containing j.
Vector baseline_frequency(const std::vector<Selection>& selections, std::size_t p);

} // namespace dkn
