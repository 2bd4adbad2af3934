#include "dkn/extensions/side_info.hpp"

#include "dkn/error.hpp"
#include "dkn/numerics/tolerances.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace dkn {

EValueVector weighted_evalues(const Vector& w, const ThresholdResult& thr, const SideInfo& side, std::size_t p_dim)
{
    if (side.u.size() != w.size()) {
        throw Error(Errc::DimensionMismatch, "side information length differs from w");
    }
    for (Eigen::Index j = 0; j < side.u.size(); ++j) {
        if (!(side.u(j) > 0.0) || !std::isfinite(side.u(j))) {
            throw Error(Errc::NonPositiveWeight, "weight " + std::to_string(j) + " is not positive");
        }
    }
    if (thr.offset_c < 1.0) {
        throw Error(Errc::OffsetTooSmall, "weighted e-values need a threshold computed with c >= 1");
    }
    EValueVector out;
    out.p_dim = p_dim;
    out.source = "weighted";
    out.e = Vector::Zero(w.size());
    if (!thr.finite()) {
        return out;
    }
    double negative_mass = 0.0;
    for (Eigen::Index k = 0; k < w.size(); ++k) {
        if (w(k) <= -thr.t) {
            negative_mass += side.u(k);
        }
    }
    const auto p = static_cast<double>(p_dim);
    for (Eigen::Index j = 0; j < w.size(); ++j) {
        if (w(j) >= thr.t) {
            out.e(j) = p * side.u(j) / (side.u(j) + negative_mass);
        }
    }
    return out;
}

OrderingRule default_ordering_rule()
{
    return [](const MaskedState& s) {
        std::size_t best = std::numeric_limits<std::size_t>::max();
        for (std::size_t j = 0; j < s.screened.size(); ++j) {
            if (s.screened[j]) {
                continue;
            }
            if (best == std::numeric_limits<std::size_t>::max()) {
                best = j;
                continue;
            }
            const auto jj = static_cast<Eigen::Index>(j);
            const auto bb = static_cast<Eigen::Index>(best);
            const double uj = s.side.u.size() ? s.side.u(jj) : 0.0;
            const double ub = s.side.u.size() ? s.side.u(bb) : 0.0;
            if (uj < ub || (uj == ub && s.magnitude(jj) < s.magnitude(bb))) {
                best = j;
            }
        }
        return best;
    };
}

AdaptiveResult adaptive_knockoff_evalues(const Vector& w, const SideInfo& side, const OrderingRule& rule,
                                         double alpha_kn, std::size_t p_dim)
{
    if (!(alpha_kn > 0.0 && alpha_kn <= 1.0)) {
        throw Error(Errc::InvalidArgument, "alpha_kn must lie in (0, 1]");
    }
    if (side.u.size() != 0 && side.u.size() != w.size()) {
        throw Error(Errc::DimensionMismatch, "side information length differs from w");
    }
    const auto p = static_cast<std::size_t>(w.size());
    const Vector magnitude = w.cwiseAbs();
    std::vector<bool> screened(p, false);
    std::vector<int> revealed(p, 0);
    std::size_t positive = 0;
    std::size_t negative = 0;
    for (Eigen::Index j = 0; j < w.size(); ++j) {
        positive += w(j) > 0.0;
        negative += w(j) < 0.0;
    }

    AdaptiveResult out;
    out.stop = p;
    for (std::size_t k = 0; k <= p; ++k) {
        const double denom = static_cast<double>(std::max<std::size_t>(positive, 1));
        if (leq_rel(1.0 + static_cast<double>(negative), alpha_kn * denom)) {
            out.stop = k;
            break;
        }
        if (k == p) {
            break;
        }
        const MaskedState state{side, magnitude, screened, revealed, k, positive, negative};
        const std::size_t next = rule(state);
        if (next >= p || screened[next]) {
            throw Error(Errc::InvalidOrdering, "ordering rule returned index " + std::to_string(next));
        }
        screened[next] = true;
        const double v = w(static_cast<Eigen::Index>(next));
        revealed[next] = v > 0.0 ? 1 : (v < 0.0 ? -1 : 0);
        positive -= v > 0.0;
        negative -= v < 0.0;
        out.order.push_back(next);
    }

    out.e.p_dim = p_dim;
    out.e.source = "adaptive";
    out.e.e = Vector::Zero(w.size());
    if (positive > 0) {
        const double value = static_cast<double>(p_dim) / (1.0 + static_cast<double>(negative));
        for (std::size_t j = 0; j < p; ++j) {
            if (!screened[j] && w(static_cast<Eigen::Index>(j)) > 0.0) {
                out.e.e(static_cast<Eigen::Index>(j)) = value;
            }
        }
    }
    return out;
}

DerandomizedResult aggregate_weighted(const std::vector<ImportanceVector>& statistics, const SideInfo& side,
                                      const DerandomizeOptions& options)
{
    if (statistics.empty()) {
        throw Error(Errc::InvalidArgument, "at least one run is required");
    }
    DerandomizedResult out;
    std::vector<EValueVector> evalues;
    const auto p = static_cast<std::size_t>(statistics.front().w.size());
    for (const auto& s : statistics) {
        const ThresholdResult thr = knockoff_threshold(s.w, options.alpha_kn, options.offset_c, options.early_stop);
        evalues.push_back(weighted_evalues(s.w, thr, side, p));
        if (options.keep_runs) {
            out.thresholds.push_back(thr);
        }
    }
    out.e_avg = average_evalues(evalues);
    out.selection = ebh(out.e_avg, options.alpha_ebh);
    out.selection.method = "weighted";
    if (options.keep_runs) {
        out.statistics = statistics;
        out.run_evalues = std::move(evalues);
    }
    return out;
}

DerandomizedResult aggregate_adaptive(const std::vector<ImportanceVector>& statistics, const SideInfo& side,
                                      const OrderingRule& rule, const DerandomizeOptions& options)
{
    if (statistics.empty()) {
        throw Error(Errc::InvalidArgument, "at least one run is required");
    }
    DerandomizedResult out;
    std::vector<EValueVector> evalues;
    const auto p = static_cast<std::size_t>(statistics.front().w.size());
    for (const auto& s : statistics) {
        evalues.push_back(adaptive_knockoff_evalues(s.w, side, rule, options.alpha_kn, p).e);
    }
    out.e_avg = average_evalues(evalues);
    out.selection = ebh(out.e_avg, options.alpha_ebh);
    out.selection.method = "adaptive";
    if (options.keep_runs) {
        out.statistics = statistics;
        out.run_evalues = std::move(evalues);
    }
    return out;
}

} // namespace dkn
