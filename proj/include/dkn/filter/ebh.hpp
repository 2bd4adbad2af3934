#pragma once

#include "dkn/filter/evalues.hpp"
#include "dkn/numerics/linalg.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace dkn {

/// Selected features (0-based, ascending) and the metadata behind them.
struct SelectionResult {
    std::vector<std::size_t> selected;
    std::size_t khat = 0;
    double level = 0.0;
    std::string method;
};

/// e-BH at `level` over p = e.p_dim hypotheses:
/// k̂ = max{k : e_(k) ≥ p/(level·k)}, selected = {j : e_j ≥ p/(level·k̂)}.
SelectionResult ebh(const EValueVector& e, double level);

/// Knockoff filter {j : w_j ≥ T} with T from knockoff_threshold(w, alpha, 1, false).
SelectionResult knockoff_filter(const Vector& w, double alpha);

} // namespace dkn
