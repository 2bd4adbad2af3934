#include "dkn/numerics/binomial.hpp"

#include "dkn/error.hpp"

#include <algorithm>
#include <cmath>

namespace dkn {

double binom_pmf(std::int64_t x, std::int64_t m, double prob)
{
    if (x < 0 || x > m) {
        return 0.0;
    }
    if (prob == 0.0) {
        return x == 0 ? 1.0 : 0.0;
    }
    if (prob == 1.0) {
        return x == m ? 1.0 : 0.0;
    }
    const double xd = static_cast<double>(x);
    const double md = static_cast<double>(m);
    const double log_choose = std::lgamma(md + 1.0) - std::lgamma(xd + 1.0) - std::lgamma(md - xd + 1.0);
    return std::exp(log_choose + xd * std::log(prob) + (md - xd) * std::log1p(-prob));
}

BinomialCdfPmf binom_cdf_pmf(std::int64_t x, std::int64_t m, double prob)
{
    if (m < 0 || !(prob >= 0.0 && prob <= 1.0)) {
        throw Error(Errc::InvalidArgument, "binomial requires m >= 0 and prob in [0,1]");
    }
    if (x < 0) {
        return {0.0, 0.0};
    }
    const double pmf = binom_pmf(x, m, prob);
    if (x >= m) {
        return {1.0, pmf};
    }
    double cdf = 0.0;
    for (std::int64_t i = 0; i <= x; ++i) {
        cdf += binom_pmf(i, m, prob);
    }
    return {std::min(cdf, 1.0), pmf};
}

} // namespace dkn
