#include "dkn/filter/evalues.hpp"

#include "dkn/error.hpp"

#include <algorithm>
#include <string>

namespace dkn {

namespace {

EValueVector evalues_with_offset(const Vector& w, const ThresholdResult& thr, std::size_t p_dim,
                                 double offset)
{
    EValueVector out;
    out.p_dim = p_dim;
    out.source = "single_run";
    out.e = Vector::Zero(w.size());
    if (!thr.finite()) {
        return out;
    }
    std::size_t negatives = 0;
    for (Eigen::Index j = 0; j < w.size(); ++j) {
        if (w(j) <= -thr.t) {
            ++negatives;
        }
    }
    const double value = static_cast<double>(p_dim) / (offset + static_cast<double>(negatives));
    for (Eigen::Index j = 0; j < w.size(); ++j) {
        if (w(j) >= thr.t) {
            out.e(j) = value;
        }
    }
    return out;
}

} // namespace

EValueVector knockoff_evalues(const Vector& w, const ThresholdResult& thr, std::size_t p_dim)
{
    if (thr.offset_c < 1.0) {
        throw Error(Errc::OffsetTooSmall,
                    "e-values need a threshold computed with c >= 1 (got " + std::to_string(thr.offset_c) + ")");
    }
    return evalues_with_offset(w, thr, p_dim, 1.0);
}

HeatmapEValues heatmap_evalues(const Vector& w, const ThresholdResult& thr, std::size_t p_dim)
{
    HeatmapEValues out;
    out.values = evalues_with_offset(w, thr, p_dim, std::max(thr.offset_c, 1.0));
    out.values.source = "heatmap";
    out.valid = thr.offset_c >= 1.0;
    return out;
}

} // namespace dkn
