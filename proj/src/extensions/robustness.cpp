#include "dkn/extensions/robustness.hpp"

#include "dkn/error.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace dkn {

namespace {

struct Conditionals {
    Matrix mean;  // n×p conditional means given X_i,−j
    Vector var;   // p conditional variances
};

Conditionals conditionals_of(const GaussianModel& model, const Matrix& X)
{
    const Matrix& omega = model.precision();
    const Vector diag = omega.diagonal();
    for (Eigen::Index j = 0; j < diag.size(); ++j) {
        if (!(diag(j) > 0.0) || !std::isfinite(diag(j))) {
            throw Error(Errc::DegenerateConditional, "conditional variance of feature " + std::to_string(j)
                                                         + " is not positive");
        }
    }
    const Matrix centered = X.rowwise() - model.mean().transpose();
    // E[X_j | X_−j] = x_j − (Ω(x − μ))_j / Ω_jj
    Conditionals c;
    c.mean = X - (centered * omega) * diag.cwiseInverse().asDiagonal();
    c.var = diag.cwiseInverse();
    return c;
}

double log_density(double x, double mean, double var)
{
    const double d = x - mean;
    return -0.5 * std::log(2.0 * std::numbers::pi * var) - 0.5 * d * d / var;
}

} // namespace

KlDiagnostic empirical_kl(const GaussianModel& model_true, const GaussianModel& model_used, const Matrix& X,
                          const std::vector<Matrix>& xt_runs)
{
    const auto p = static_cast<Eigen::Index>(model_true.dim());
    if (static_cast<Eigen::Index>(model_used.dim()) != p || X.cols() != p) {
        throw Error(Errc::DimensionMismatch, "models and X disagree on dimension");
    }
    const Conditionals cp = conditionals_of(model_true, X);
    const Conditionals cq = conditionals_of(model_used, X);

    // The observed-data term does not depend on the run.
    Vector base = Vector::Zero(p);
    for (Eigen::Index j = 0; j < p; ++j) {
        double s = 0.0;
        for (Eigen::Index i = 0; i < X.rows(); ++i) {
            s += log_density(X(i, j), cp.mean(i, j), cp.var(j)) - log_density(X(i, j), cq.mean(i, j), cq.var(j));
        }
        base(j) = s;
    }

    KlDiagnostic out;
    out.kl_max = Vector::Constant(p, -std::numeric_limits<double>::infinity());
    for (const Matrix& xt : xt_runs) {
        if (xt.rows() != X.rows() || xt.cols() != p) {
            throw Error(Errc::DimensionMismatch, "knockoff copy shape differs from X");
        }
        Vector kl(p);
        for (Eigen::Index j = 0; j < p; ++j) {
            double s = 0.0;
            for (Eigen::Index i = 0; i < X.rows(); ++i) {
                s += log_density(xt(i, j), cq.mean(i, j), cq.var(j)) - log_density(xt(i, j), cp.mean(i, j), cp.var(j));
            }
            kl(j) = base(j) + s;
        }
        out.kl_max = out.kl_max.cwiseMax(kl);
        out.kl.push_back(std::move(kl));
    }
    if (xt_runs.empty()) {
        out.kl_max.setZero();
    }
    return out;
}

} // namespace dkn
