#pragma once

#include "dkn/numerics/linalg.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace dkn {

/// One moment comparison between the original and swapped joint law.
struct MomentDiscrepancy {
    std::string moment;   // "mean", "var", "cov_x", "cov_xt"
    std::size_t partner;  // k for covariance moments, j otherwise
    double difference;    // sample mean of the paired difference
    double z;             // difference / standard error (0 when the SE is 0)
    bool flagged;         // |z| > kFlagZ
};

struct ExchangeabilityReport {
    std::size_t feature = 0;
    std::size_t rows = 0;
    double max_abs_z = 0.0;
    bool flagged = false;
    std::vector<MomentDiscrepancy> moments;
};

inline constexpr double kFlagZ = 4.0;

/// Advisory two-sample check that swapping X_j and X̃_j leaves the first and
/// second joint moments unchanged. Compares, through paired row-wise
/// differences, mean(X_j) with mean(X̃_j), var(X_j) with var(X̃_j), and for each
/// k ≠ j cov(X_j, X_k) with cov(X̃_j, X_k) and cov(X_j, X̃_k) with cov(X̃_j, X̃_k).
/// A copy with X̃ = X yields zero discrepancy: the check cannot detect it.
ExchangeabilityReport exchangeability_diagnostic(const Matrix& X, const Matrix& Xt, std::size_t j);

} // namespace dkn
