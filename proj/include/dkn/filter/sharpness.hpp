#pragma once

#include "dkn/filter/ebh.hpp"
#include "dkn/filter/evalues.hpp"

#include <cstddef>
#include <vector>

namespace dkn {

struct SharpnessEntry {
    std::size_t feature;
    double e;
    double ratio;  // e / (p / (level·|S|))
};

struct SharpnessReport {
    std::size_t selected = 0;
    double bar = 0.0;  // p / (level·|S|)
    double min_ratio = 0.0;
    double max_ratio = 0.0;
    std::vector<SharpnessEntry> entries;
};

/// Ratio of each nonzero e-value to the e-BH bar p/(level·|S|) implied by the
/// selection. Values near 1 mean the e-values are close to sharp. Empty
/// report for an empty selection.
SharpnessReport sharpness_diagnostic(const EValueVector& e, const SelectionResult& sel);

} // namespace dkn
