#include "dkn/filter/threshold.hpp"

#include "dkn/error.hpp"
#include "dkn/numerics/tolerances.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace dkn {

ThresholdResult knockoff_threshold(const Vector& w, double alpha_kn, double c, bool early_stop)
{
    if (!(alpha_kn > 0.0 && alpha_kn <= 1.0)) {
        throw Error(Errc::InvalidArgument, "alpha_kn must lie in (0, 1]");
    }
    if (!(c >= 0.0) || !std::isfinite(c)) {
        throw Error(Errc::InvalidArgument, "offset c must be finite and nonnegative");
    }
    if (!w.allFinite()) {
        throw Error(Errc::NonFinite, "statistic has non-finite entries");
    }
    ThresholdResult out;
    out.offset_c = c;
    out.alpha_kn = alpha_kn;

    // pos: positive entries ascending; neg: magnitudes of negative entries ascending.
    std::vector<double> pos;
    std::vector<double> neg;
    for (Eigen::Index j = 0; j < w.size(); ++j) {
        if (w(j) > 0.0) {
            pos.push_back(w(j));
        } else if (w(j) < 0.0) {
            neg.push_back(-w(j));
        }
    }
    std::sort(pos.begin(), pos.end());
    std::sort(neg.begin(), neg.end());
    std::vector<double> candidates(pos);
    candidates.insert(candidates.end(), neg.begin(), neg.end());
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    for (const double t : candidates) {
        const auto ge = static_cast<std::size_t>(pos.end() - std::lower_bound(pos.begin(), pos.end(), t));
        const auto le = static_cast<std::size_t>(neg.end() - std::lower_bound(neg.begin(), neg.end(), t));
        const double budget = alpha_kn * static_cast<double>(ge);
        if (ge > 0 && leq_rel(c + static_cast<double>(le), budget)) {
            out.t = t;
            out.num_ge = ge;
            out.num_le_neg = le;
            return out;
        }
        if (early_stop && !leq_rel(1.0, budget)) {
            out.t = t;
            out.early_stopped = true;
            out.num_ge = ge;
            out.num_le_neg = le;
            return out;
        }
    }
    out.num_le_neg = 0;
    out.num_ge = 0;
    return out;
}

} // namespace dkn
