#pragma once

#include <cstdint>

namespace dkn {

struct BinomialCdfPmf {
    double cdf; // P(B <= x)
    double pmf; // P(B == x)
};

/// Binomial(m, prob) distribution function and mass at x. For x < 0 both are
/// zero; for x >= m the cdf is exactly 1. Otherwise the cdf is the running sum
/// of the same pmf values this function returns.
BinomialCdfPmf binom_cdf_pmf(std::int64_t x, std::int64_t m, double prob);

double binom_pmf(std::int64_t x, std::int64_t m, double prob);

} // namespace dkn
