#include "dkn/harness/metrics.hpp"

#include "dkn/error.hpp"

#include <algorithm>

namespace dkn {

SelectionScore score_selection(const Selection& selected, const ExperimentTruth& truth)
{
    std::size_t hits = 0;
    for (const std::size_t j : selected) {
        if (std::binary_search(truth.nonnulls.begin(), truth.nonnulls.end(), j)) {
            ++hits;
        }
    }
    SelectionScore s;
    if (!truth.nonnulls.empty()) {
        s.power = static_cast<double>(hits) / static_cast<double>(truth.nonnulls.size());
    }
    const std::size_t false_hits = selected.size() - hits;
    s.fdp = static_cast<double>(false_hits) / static_cast<double>(std::max<std::size_t>(selected.size(), 1));
    return s;
}

Vector baseline_frequency(const std::vector<Selection>& selections, std::size_t p)
{
    if (selections.empty()) {
        throw Error(Errc::InvalidArgument, "no selections to average");
    }
    Vector freq = Vector::Zero(static_cast<Eigen::Index>(p));
    for (const auto& s : selections) {
        for (const std::size_t j : s) {
            if (j >= p) {
                throw Error(Errc::InvalidArgument, "selected index out of range");
            }
            freq(static_cast<Eigen::Index>(j)) += 1.0;
        }
    }
    return freq / static_cast<double>(selections.size());
}

namespace {

double spread(const Vector& freq)
{
    return (freq.array() * (1.0 - freq.array())).sum();
}

double baseline_spread(double mean_size, std::size_t p)
{
    const double pd = static_cast<double>(p);
    return pd * (mean_size / pd) * (1.0 - mean_size / pd);
}

} // namespace

Variability selection_variability(const SelectionTable& table, std::size_t p)
{
    if (table.empty() || table.front().empty()) {
        throw Error(Errc::InvalidArgument, "selection table is empty");
    }
    const std::size_t reruns = table.front().size();
    std::vector<Selection> all;
    double num_cond = 0.0;
    double den_cond = 0.0;
    double total_size = 0.0;
    for (const auto& row : table) {
        if (row.size() != reruns) {
            throw Error(Errc::InvalidArgument, "selection table is ragged");
        }
        double size_d = 0.0;
        for (const auto& s : row) {
            size_d += static_cast<double>(s.size());
            all.push_back(s);
        }
        total_size += size_d;
        num_cond += spread(baseline_frequency(row, p));
        den_cond += baseline_spread(size_d / static_cast<double>(reruns), p);
    }
    Variability v;
    const double mean_size = total_size / static_cast<double>(all.size());
    const double den_marg = baseline_spread(mean_size, p);
    const double num_marg = spread(baseline_frequency(all, p));
    v.marginal = den_marg > 0.0 ? num_marg / den_marg : 0.0;
    v.conditional = den_cond > 0.0 ? num_cond / den_cond : 0.0;
    return v;
}

} // namespace dkn
