#include "dkn/filter/sharpness.hpp"

#include <algorithm>

namespace dkn {

SharpnessReport sharpness_diagnostic(const EValueVector& e, const SelectionResult& sel)
{
    SharpnessReport report;
    report.selected = sel.selected.size();
    if (sel.selected.empty() || !(sel.level > 0.0)) {
        return report;
    }
    report.bar = static_cast<double>(e.p_dim) / (sel.level * static_cast<double>(sel.selected.size()));
    bool first = true;
    for (Eigen::Index j = 0; j < e.e.size(); ++j) {
        if (e.e(j) <= 0.0) {
            continue;
        }
        const double ratio = e.e(j) / report.bar;
        report.entries.push_back({static_cast<std::size_t>(j), e.e(j), ratio});
        report.min_ratio = first ? ratio : std::min(report.min_ratio, ratio);
        report.max_ratio = first ? ratio : std::max(report.max_ratio, ratio);
        first = false;
    }
    return report;
}

} // namespace dkn
