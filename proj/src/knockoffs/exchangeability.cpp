#include "dkn/knockoffs/exchangeability.hpp"

#include "dkn/error.hpp"

#include <cmath>

namespace dkn {

namespace {

MomentDiscrepancy paired(std::string moment, std::size_t partner, const Vector& d)
{
    const double n = static_cast<double>(d.size());
    const double mean = d.mean();
    double se = 0.0;
    if (d.size() > 1) {
        se = std::sqrt((d.array() - mean).square().sum() / (n - 1.0) / n);
    }
    const double z = se > 0.0 ? mean / se : 0.0;
    return {std::move(moment), partner, mean, z, std::abs(z) > kFlagZ};
}

} // namespace

ExchangeabilityReport exchangeability_diagnostic(const Matrix& X, const Matrix& Xt, std::size_t j)
{
    if (X.rows() != Xt.rows() || X.cols() != Xt.cols()) {
        throw Error(Errc::DimensionMismatch, "X and Xt shapes differ");
    }
    const auto jj = static_cast<Eigen::Index>(j);
    if (jj >= X.cols()) {
        throw Error(Errc::InvalidArgument, "feature index out of range");
    }
    ExchangeabilityReport report;
    report.feature = j;
    report.rows = static_cast<std::size_t>(X.rows());
    if (X.rows() < 2) {
        return report;
    }

    const Vector mx = X.colwise().mean().transpose();
    const Vector mt = Xt.colwise().mean().transpose();
    const Vector cx = X.col(jj).array() - mx(jj);
    const Vector ct = Xt.col(jj).array() - mt(jj);

    report.moments.push_back(paired("mean", j, X.col(jj) - Xt.col(jj)));
    report.moments.push_back(paired("var", j, cx.cwiseAbs2() - ct.cwiseAbs2()));
    for (Eigen::Index k = 0; k < X.cols(); ++k) {
        if (k == jj) {
            continue;
        }
        const Vector xk = X.col(k).array() - mx(k);
        const Vector tk = Xt.col(k).array() - mt(k);
        const auto kk = static_cast<std::size_t>(k);
        report.moments.push_back(paired("cov_x", kk, (cx - ct).cwiseProduct(xk)));
        report.moments.push_back(paired("cov_xt", kk, (cx - ct).cwiseProduct(tk)));
    }
    for (const auto& m : report.moments) {
        report.max_abs_z = std::max(report.max_abs_z, std::abs(m.z));
        report.flagged = report.flagged || m.flagged;
    }
    return report;
}

} // namespace dkn
