#include "dkn/filter/ebh.hpp"

#include "dkn/error.hpp"
#include "dkn/filter/threshold.hpp"
#include "dkn/numerics/tolerances.hpp"

#include <algorithm>
#include <functional>

namespace dkn {

SelectionResult ebh(const EValueVector& e, double level)
{
    if (!(level > 0.0 && level <= 1.0)) {
        throw Error(Errc::InvalidArgument, "e-BH level must lie in (0, 1]");
    }
    if ((e.e.array() < 0.0).any() || !e.e.allFinite()) {
        throw Error(Errc::InvalidArgument, "e-values must be finite and nonnegative");
    }
    SelectionResult out;
    out.level = level;
    out.method = "ebh";
    const auto p = static_cast<double>(e.p_dim);

    std::vector<double> sorted(e.e.data(), e.e.data() + e.e.size());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    for (std::size_t k = sorted.size(); k >= 1; --k) {
        // e_(k) ≥ p/(level·k)
        if (sorted[k - 1] > 0.0 && leq_rel(p, level * static_cast<double>(k) * sorted[k - 1])) {
            out.khat = k;
            break;
        }
    }
    if (out.khat == 0) {
        return out;
    }
    const double scale = level * static_cast<double>(out.khat);
    for (Eigen::Index j = 0; j < e.e.size(); ++j) {
        if (e.e(j) > 0.0 && leq_rel(p, scale * e.e(j))) {
            out.selected.push_back(static_cast<std::size_t>(j));
        }
    }
    return out;
}

SelectionResult knockoff_filter(const Vector& w, double alpha)
{
    const ThresholdResult thr = knockoff_threshold(w, alpha, 1.0, false);
    SelectionResult out;
    out.level = alpha;
    out.method = "knockoff";
    if (thr.finite()) {
        for (Eigen::Index j = 0; j < w.size(); ++j) {
            if (w(j) >= thr.t) {
                out.selected.push_back(static_cast<std::size_t>(j));
            }
        }
    }
    out.khat = out.selected.size();
    return out;
}

} // namespace dkn
