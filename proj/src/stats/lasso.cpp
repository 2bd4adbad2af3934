#include "dkn/stats/lasso.hpp"

#include "lasso_engine.hpp"

#include "dkn/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace dkn {

namespace detail {

double ordered_dot(const double* x, const double* y, Eigen::Index n) noexcept
{
    double s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        s += x[i] * y[i];
    }
    return s;
}

Matrix ordered_gram(const Matrix& a, double scale)
{
    const Eigen::Index q = a.cols();
    Matrix g(q, q);
    for (Eigen::Index k = 0; k < q; ++k) {
        for (Eigen::Index j = k; j < q; ++j) {
            const double v = ordered_dot(a.col(j).data(), a.col(k).data(), a.rows()) / scale;
            g(j, k) = v;
            g(k, j) = v;
        }
    }
    return g;
}

double soft_threshold(double v, double t) noexcept
{
    if (v > t) {
        return v - t;
    }
    if (v < -t) {
        return v + t;
    }
    return 0.0;
}

double log1pexp(double x) noexcept
{
    if (x > 0.0) {
        return x + std::log1p(std::exp(-x));
    }
    return std::log1p(std::exp(x));
}

namespace {

double sigmoid(double x) noexcept
{
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

double sign_of(double v) noexcept
{
    return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0);
}

// Violation of the subgradient condition for one coordinate with gradient g.
double coordinate_kkt(double x, double g, double lambda) noexcept
{
    if (x > 0.0) {
        return std::abs(g + lambda);
    }
    if (x < 0.0) {
        return std::abs(g - lambda);
    }
    return std::max(std::abs(g) - lambda, 0.0);
}

std::vector<Eigen::Index> support_of(const Vector& x)
{
    std::vector<Eigen::Index> s;
    for (Eigen::Index a = 0; a < x.size(); ++a) {
        if (x(a) != 0.0) {
            s.push_back(a);
        }
    }
    return s;
}

// Active-set refinements per exact solve attempt.
constexpr int kPolishRounds = 6;
// Newton steps per sign pattern in the logistic refinement.
constexpr int kNewtonSteps = 30;

void merge_violators(std::vector<Eigen::Index>& set, const std::vector<Eigen::Index>& extra)
{
    set.insert(set.end(), extra.begin(), extra.end());
    std::sort(set.begin(), set.end());
}

} // namespace

QuadraticPath::QuadraticPath(const Matrix& gram, const Vector& c, const SolverOptions& options)
    : g_(gram), c_(c), options_(options), beta_(Vector::Zero(c.size())),
      gbeta_(Vector::Zero(c.size())), last_lambda_(c.size() ? c.cwiseAbs().maxCoeff() : 0.0)
{
    if (gram.rows() != c.size() || gram.cols() != c.size()) {
        throw Error(Errc::DimensionMismatch, "Gram matrix and linear term disagree");
    }
}

void QuadraticPath::refresh_gradient()
{
    gbeta_.setZero();
    const Eigen::Index q = beta_.size();
    for (Eigen::Index k = 0; k < q; ++k) {
        const double bk = beta_(k);
        if (bk == 0.0) {
            continue;
        }
        const double* col = g_.col(k).data();
        for (Eigen::Index j = 0; j < q; ++j) {
            gbeta_(j) += col[j] * bk;
        }
    }
}

void QuadraticPath::solve(double lambda)
{
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw Error(Errc::InvalidArgument, "lambda must be finite and nonnegative");
    }
    const Eigen::Index q = beta_.size();
    refresh_gradient();
    const double strong = 2.0 * lambda - last_lambda_;
    std::vector<Eigen::Index> set;
    for (Eigen::Index j = 0; j < q; ++j) {
        if (beta_(j) != 0.0 || std::abs(c_(j) - gbeta_(j)) >= strong) {
            set.push_back(j);
        }
    }
    iterations_ = 0;
    converged_ = true;
    for (;;) {
        converged_ = solve_restricted(set, lambda) && converged_;
        refresh_gradient();
        std::vector<Eigen::Index> violators;
        std::size_t next = 0;
        for (Eigen::Index j = 0; j < q; ++j) {
            if (next < set.size() && set[next] == j) {
                ++next;
                continue;
            }
            if (std::abs(c_(j) - gbeta_(j)) > lambda + options_.kkt) {
                violators.push_back(j);
            }
        }
        if (violators.empty()) {
            break;
        }
        merge_violators(set, violators);
    }
    last_lambda_ = lambda;
}

bool QuadraticPath::solve_restricted(const std::vector<Eigen::Index>& set, double lambda)
{
    const auto m = static_cast<Eigen::Index>(set.size());
    if (m == 0) {
        return true;
    }
    Matrix gs(m, m);
    Vector cs(m);
    Vector x(m);
    for (Eigen::Index b = 0; b < m; ++b) {
        cs(b) = c_(set[b]);
        x(b) = beta_(set[b]);
        for (Eigen::Index a = 0; a < m; ++a) {
            gs(a, b) = g_(set[a], set[b]);
        }
    }

    auto mult = [&](const Vector& v, Vector& out) {
        out.setZero();
        for (Eigen::Index b = 0; b < m; ++b) {
            const double vb = v(b);
            if (vb == 0.0) {
                continue;
            }
            const double* col = gs.col(b).data();
            for (Eigen::Index a = 0; a < m; ++a) {
                out(a) += col[a] * vb;
            }
        }
    };
    auto objective = [&](const Vector& v, const Vector& gv) {
        double f = 0.0;
        for (Eigen::Index a = 0; a < m; ++a) {
            f += 0.5 * v(a) * gv(a) - cs(a) * v(a) + lambda * std::abs(v(a));
        }
        return f;
    };
    auto kkt = [&](const Vector& v, const Vector& gv) {
        double worst = 0.0;
        for (Eigen::Index a = 0; a < m; ++a) {
            worst = std::max(worst, coordinate_kkt(v(a), gv(a) - cs(a), lambda));
        }
        return worst;
    };
    // Exact solve of the stationarity equations for a sign pattern, refined
    // primal-dual active-set style: coordinates whose sign flips leave the
    // support, KKT violators enter it. Accepted only once signs are preserved
    // and the KKT conditions hold everywhere; singular systems (exact ties)
    // are rejected so the proximal iterations decide them.
    Vector trial(m);
    Vector gtrial(m);
    std::vector<double> pattern(static_cast<std::size_t>(m));
    auto polish = [&](const Vector& v, int rounds) {
        for (Eigen::Index a = 0; a < m; ++a) {
            pattern[static_cast<std::size_t>(a)] = sign_of(v(a));
        }
        for (int round = 0; round < rounds; ++round) {
            std::vector<Eigen::Index> sup;
            for (Eigen::Index a = 0; a < m; ++a) {
                if (pattern[static_cast<std::size_t>(a)] != 0.0) {
                    sup.push_back(a);
                }
            }
            trial.setZero();
            if (!sup.empty()) {
                const auto k = static_cast<Eigen::Index>(sup.size());
                Matrix h(k, k);
                Vector rhs(k);
                double top = 0.0;
                for (Eigen::Index b = 0; b < k; ++b) {
                    rhs(b) = cs(sup[b]) - lambda * pattern[static_cast<std::size_t>(sup[b])];
                    for (Eigen::Index a = 0; a < k; ++a) {
                        h(a, b) = gs(sup[a], sup[b]);
                    }
                    top = std::max(top, h(b, b));
                }
                Eigen::LLT<Matrix> llt(h);
                if (llt.info() != Eigen::Success) {
                    return false;
                }
                const Matrix& l = llt.matrixLLT();
                for (Eigen::Index b = 0; b < k; ++b) {
                    if (!(l(b, b) * l(b, b) > 1e-10 * top)) {
                        return false;
                    }
                }
                const Vector sol = llt.solve(rhs);
                for (Eigen::Index b = 0; b < k; ++b) {
                    trial(sup[b]) = sol(b);
                }
            }
            mult(trial, gtrial);
            bool changed = false;
            for (Eigen::Index a = 0; a < m; ++a) {
                double& sa = pattern[static_cast<std::size_t>(a)];
                if (sa != 0.0) {
                    if (sign_of(trial(a)) != sa) {
                        sa = 0.0;
                        changed = true;
                    }
                } else {
                    const double g = gtrial(a) - cs(a);
                    if (std::abs(g) > lambda + options_.kkt) {
                        sa = -sign_of(g);
                        changed = true;
                    }
                }
            }
            if (!changed) {
                return kkt(trial, gtrial) <= options_.kkt;
            }
        }
        return false;
    };

    Vector gx(m);
    mult(x, gx);
    double f = objective(x, gx);
    Vector y = x;
    Vector gy = gx;
    Vector xn(m);
    Vector gxn(m);
    double t = 1.0;
    std::vector<Eigen::Index> last_support = support_of(x);
    std::vector<Eigen::Index> failed_support;
    bool tried_failed = false;
    std::size_t stable = 0;
    bool done = false;

    if (polish(x, kPolishRounds)) {
        x = trial;
        done = true;
    }
    while (!done && iterations_ < options_.max_iter) {
        for (;;) {
            const double inv = 1.0 / step_l_;
            for (Eigen::Index a = 0; a < m; ++a) {
                xn(a) = soft_threshold(y(a) - (gy(a) - cs(a)) * inv, lambda * inv);
            }
            mult(xn, gxn);
            double num = 0.0;
            double den = 0.0;
            for (Eigen::Index a = 0; a < m; ++a) {
                const double d = xn(a) - y(a);
                num += d * (gxn(a) - gy(a));
                den += d * d;
            }
            if (num <= step_l_ * den * (1.0 + 1e-12)) {
                break;
            }
            step_l_ *= 2.0;
        }
        ++iterations_;
        const double fn = objective(xn, gxn);
        if (!std::isfinite(fn)) {
            throw Error(Errc::NonFinite, "lasso objective diverged");
        }
        const bool small_change = std::abs(fn - f) <= options_.objective_rel * std::abs(fn);
        if (fn > f) {
            t = 1.0;
            y = xn;
            gy = gxn;
        } else {
            const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
            const double mom = (t - 1.0) / tn;
            y = xn + mom * (xn - x);
            gy = gxn + mom * (gxn - gx);
            t = tn;
        }
        x.swap(xn);
        gx.swap(gxn);
        f = fn;

        if (small_change && kkt(x, gx) <= options_.kkt) {
            done = true;
            break;
        }
        std::vector<Eigen::Index> sup = support_of(x);
        stable = (sup == last_support) ? stable + 1 : 0;
        last_support = std::move(sup);
        if (stable >= 2 && !(tried_failed && last_support == failed_support)) {
            if (polish(x, kPolishRounds)) {
                x = trial;
                done = true;
                break;
            }
            failed_support = last_support;
            tried_failed = true;
        }
    }
    for (Eigen::Index a = 0; a < m; ++a) {
        beta_(set[a]) = x(a);
    }
    return done;
}

LogisticPath::LogisticPath(const Matrix& z, const Vector& y, const SolverOptions& options)
    : z_(z), y_(y), options_(options), beta_(Vector::Zero(z.cols())), grad_(Vector::Zero(z.cols()))
{
    const Eigen::Index n = z.rows();
    if (y.size() != n || n == 0) {
        throw Error(Errc::DimensionMismatch, "design rows and response length disagree");
    }
    double ones = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (y(i) != 0.0 && y(i) != 1.0) {
            throw Error(Errc::InvalidArgument, "logistic response must be 0/1");
        }
        ones += y(i);
    }
    const double ybar = ones / static_cast<double>(n);
    if (ybar <= 0.0 || ybar >= 1.0) {
        throw Error(Errc::InvalidArgument, "logistic response must contain both classes");
    }
    b0_ = std::log(ybar / (1.0 - ybar));
    eta_ = Vector::Constant(n, b0_);
    null_deviance_ = deviance();
    refresh_gradient();
    last_lambda_ = grad_.size() ? grad_.cwiseAbs().maxCoeff() : 0.0;
    // Curvature of the logistic loss is at most 1/4 per unit-variance column.
    step_l_ = 0.25;
}

double LogisticPath::deviance() const
{
    double s = 0.0;
    for (Eigen::Index i = 0; i < eta_.size(); ++i) {
        s += log1pexp(eta_(i)) - y_(i) * eta_(i);
    }
    return 2.0 * s / static_cast<double>(eta_.size());
}

void LogisticPath::refresh_gradient()
{
    const Eigen::Index n = z_.rows();
    Vector r(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        r(i) = sigmoid(eta_(i)) - y_(i);
    }
    for (Eigen::Index j = 0; j < z_.cols(); ++j) {
        grad_(j) = ordered_dot(z_.col(j).data(), r.data(), n) / static_cast<double>(n);
    }
}

void LogisticPath::solve(double lambda)
{
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw Error(Errc::InvalidArgument, "lambda must be finite and nonnegative");
    }
    const Eigen::Index q = beta_.size();
    const double strong = 2.0 * lambda - last_lambda_;
    std::vector<Eigen::Index> set;
    for (Eigen::Index j = 0; j < q; ++j) {
        if (beta_(j) != 0.0 || std::abs(grad_(j)) >= strong) {
            set.push_back(j);
        }
    }
    iterations_ = 0;
    converged_ = true;
    for (;;) {
        converged_ = solve_restricted(set, lambda) && converged_;
        refresh_gradient();
        std::vector<Eigen::Index> violators;
        std::size_t next = 0;
        for (Eigen::Index j = 0; j < q; ++j) {
            if (next < set.size() && set[next] == j) {
                ++next;
                continue;
            }
            if (std::abs(grad_(j)) > lambda + options_.kkt) {
                violators.push_back(j);
            }
        }
        if (violators.empty()) {
            break;
        }
        merge_violators(set, violators);
    }
    last_lambda_ = lambda;
}

bool LogisticPath::solve_restricted(const std::vector<Eigen::Index>& set, double lambda)
{
    const Eigen::Index n = z_.rows();
    const auto m = static_cast<Eigen::Index>(set.size());
    const double inv_n = 1.0 / static_cast<double>(n);

    auto linear = [&](double b0, const Vector& v, Vector& eta) {
        eta.setConstant(b0);
        for (Eigen::Index a = 0; a < m; ++a) {
            const double va = v(a);
            if (va == 0.0) {
                continue;
            }
            const double* col = z_.col(set[a]).data();
            for (Eigen::Index i = 0; i < n; ++i) {
                eta(i) += col[i] * va;
            }
        }
    };
    auto loss = [&](const Vector& eta) {
        double s = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            s += log1pexp(eta(i)) - y_(i) * eta(i);
        }
        return s * inv_n;
    };
    Vector r(n);
    auto gradient = [&](const Vector& eta, double& g0, Vector& g) {
        for (Eigen::Index i = 0; i < n; ++i) {
            r(i) = sigmoid(eta(i)) - y_(i);
        }
        double s = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            s += r(i);
        }
        g0 = s * inv_n;
        for (Eigen::Index a = 0; a < m; ++a) {
            g(a) = ordered_dot(z_.col(set[a]).data(), r.data(), n) * inv_n;
        }
    };
    auto penalty = [&](const Vector& v) {
        double s = 0.0;
        for (Eigen::Index a = 0; a < m; ++a) {
            s += std::abs(v(a));
        }
        return lambda * s;
    };

    // Damped Newton on the smooth problem with a fixed sign pattern, refined
    // active-set style as in the quadratic case. Writes the accepted point to
    // (pb0, px, peta).
    std::vector<double> pattern(static_cast<std::size_t>(m));
    double pb0 = 0.0;
    Vector px(m);
    Vector peta(n);
    auto kkt_at = [&](const Vector& v, const Vector& eta) {
        Vector gv(m);
        double gv0 = 0.0;
        gradient(eta, gv0, gv);
        double worst = std::abs(gv0);
        for (Eigen::Index a = 0; a < m; ++a) {
            worst = std::max(worst, coordinate_kkt(v(a), gv(a), lambda));
        }
        return worst;
    };
    auto newton = [&](const Vector& v, double v0, int rounds) {
        for (Eigen::Index a = 0; a < m; ++a) {
            pattern[static_cast<std::size_t>(a)] = sign_of(v(a));
        }
        pb0 = v0;
        px = v;
        for (int round = 0; round < rounds; ++round) {
            std::vector<Eigen::Index> sup;
            for (Eigen::Index a = 0; a < m; ++a) {
                if (pattern[static_cast<std::size_t>(a)] != 0.0) {
                    sup.push_back(a);
                } else {
                    px(a) = 0.0;
                }
            }
            const auto k = static_cast<Eigen::Index>(sup.size());
            linear(pb0, px, peta);
            auto smooth = [&](const Vector& eta, const Vector& v) {
                double s = loss(eta);
                for (const Eigen::Index a : sup) {
                    s += lambda * pattern[static_cast<std::size_t>(a)] * v(a);
                }
                return s;
            };
            double fcur = smooth(peta, px);
            bool solved = false;
            for (int it = 0; it < kNewtonSteps; ++it) {
                Vector gfull(m);
                double g0n = 0.0;
                gradient(peta, g0n, gfull);
                Vector grad(k + 1);
                grad(0) = g0n;
                for (Eigen::Index b = 0; b < k; ++b) {
                    grad(b + 1) = gfull(sup[b]) + lambda * pattern[static_cast<std::size_t>(sup[b])];
                }
                if (grad.cwiseAbs().maxCoeff() <= 0.1 * options_.kkt) {
                    solved = true;
                    break;
                }
                Matrix zw(n, k + 1);
                for (Eigen::Index i = 0; i < n; ++i) {
                    const double pi = sigmoid(peta(i));
                    zw(i, 0) = std::sqrt(pi * (1.0 - pi) * inv_n);
                }
                for (Eigen::Index b = 0; b < k; ++b) {
                    zw.col(b + 1) = z_.col(set[sup[b]]).cwiseProduct(zw.col(0));
                }
                Matrix h = Matrix::Zero(k + 1, k + 1);
                h.selfadjointView<Eigen::Lower>().rankUpdate(zw.transpose());
                h.triangularView<Eigen::StrictlyUpper>() = h.transpose();
                Eigen::LLT<Matrix> llt(h);
                if (llt.info() != Eigen::Success) {
                    return false;
                }
                const double top = h.diagonal().maxCoeff();
                const Matrix& l = llt.matrixLLT();
                for (Eigen::Index b = 0; b <= k; ++b) {
                    if (!(l(b, b) * l(b, b) > 1e-10 * top)) {
                        return false;
                    }
                }
                const Vector d = -llt.solve(grad);
                const double slope = grad.dot(d);
                double step = 1.0;
                Vector cand = px;
                Vector ceta(n);
                double fnew = 0.0;
                for (int ls = 0; ls < 30; ++ls) {
                    for (Eigen::Index b = 0; b < k; ++b) {
                        cand(sup[b]) = px(sup[b]) + step * d(b + 1);
                    }
                    linear(pb0 + step * d(0), cand, ceta);
                    fnew = smooth(ceta, cand);
                    if (fnew <= fcur + 1e-4 * step * slope) {
                        break;
                    }
                    step *= 0.5;
                }
                if (!(fnew <= fcur + 1e-4 * step * slope)) {
                    break;
                }
                pb0 += step * d(0);
                px = cand;
                peta = ceta;
                fcur = fnew;
            }
            if (!solved) {
                return false;
            }
            Vector gfull(m);
            double g0n = 0.0;
            gradient(peta, g0n, gfull);
            bool changed = false;
            for (Eigen::Index a = 0; a < m; ++a) {
                double& sa = pattern[static_cast<std::size_t>(a)];
                if (sa != 0.0) {
                    if (sign_of(px(a)) != sa) {
                        sa = 0.0;
                        changed = true;
                    }
                } else if (std::abs(gfull(a)) > lambda + options_.kkt) {
                    sa = -sign_of(gfull(a));
                    changed = true;
                }
            }
            if (!changed) {
                return kkt_at(px, peta) <= options_.kkt;
            }
        }
        return false;
    };

    Vector x(m);
    for (Eigen::Index a = 0; a < m; ++a) {
        x(a) = beta_(set[a]);
    }
    double b0 = b0_;
    Vector eta_x = eta_;
    double f = loss(eta_x) + penalty(x);
    Vector y = x;
    double yb0 = b0;
    Vector eta_y = eta_x;
    Vector xn(m);
    Vector eta_n(n);
    Vector g(m);
    double g0 = 0.0;
    double t = 1.0;
    bool done = false;
    std::vector<Eigen::Index> last_support = support_of(x);
    std::vector<Eigen::Index> failed_support;
    bool tried_failed = false;
    std::size_t stable = 0;
    auto accept_polished = [&]() {
        x = px;
        b0 = pb0;
        eta_x = peta;
        done = true;
    };
    if (newton(x, b0, kPolishRounds)) {
        accept_polished();
    }

    while (!done && iterations_ < options_.max_iter) {
        gradient(eta_y, g0, g);
        const double fy = loss(eta_y);
        double b0n = 0.0;
        double ln = 0.0;
        for (;;) {
            const double inv = 1.0 / step_l_;
            for (Eigen::Index a = 0; a < m; ++a) {
                xn(a) = soft_threshold(y(a) - g(a) * inv, lambda * inv);
            }
            b0n = yb0 - g0 * inv;
            linear(b0n, xn, eta_n);
            ln = loss(eta_n);
            double lin = g0 * (b0n - yb0);
            double sq = (b0n - yb0) * (b0n - yb0);
            for (Eigen::Index a = 0; a < m; ++a) {
                const double d = xn(a) - y(a);
                lin += g(a) * d;
                sq += d * d;
            }
            if (ln <= fy + lin + 0.5 * step_l_ * sq + 1e-15 * std::abs(fy)) {
                break;
            }
            step_l_ *= 2.0;
        }
        ++iterations_;
        const double fn = ln + penalty(xn);
        if (!std::isfinite(fn)) {
            throw Error(Errc::NonFinite, "logistic lasso objective diverged");
        }
        const bool small_change = std::abs(fn - f) <= options_.objective_rel * std::abs(fn);
        if (fn > f) {
            t = 1.0;
            y = xn;
            yb0 = b0n;
            eta_y = eta_n;
        } else {
            const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
            const double mom = (t - 1.0) / tn;
            y = xn + mom * (xn - x);
            yb0 = b0n + mom * (b0n - b0);
            eta_y = eta_n + mom * (eta_n - eta_x);
            t = tn;
        }
        x = xn;
        b0 = b0n;
        eta_x = eta_n;
        f = fn;
        if (small_change) {
            Vector gx(m);
            double gx0 = 0.0;
            gradient(eta_x, gx0, gx);
            double worst = std::abs(gx0);
            for (Eigen::Index a = 0; a < m; ++a) {
                worst = std::max(worst, coordinate_kkt(x(a), gx(a), lambda));
            }
            if (worst <= options_.kkt) {
                done = true;
                break;
            }
        }
        std::vector<Eigen::Index> sup = support_of(x);
        stable = (sup == last_support) ? stable + 1 : 0;
        last_support = std::move(sup);
        if (stable >= 2 && !(tried_failed && last_support == failed_support)) {
            if (newton(x, b0, kPolishRounds)) {
                accept_polished();
                break;
            }
            failed_support = last_support;
            tried_failed = true;
        }
    }
    for (Eigen::Index a = 0; a < m; ++a) {
        beta_(set[a]) = x(a);
    }
    b0_ = b0;
    eta_ = eta_x;
    return done;
}

} // namespace detail

using detail::ordered_dot;

std::string_view to_string(Family family) noexcept
{
    return family == Family::gaussian ? "gaussian" : "logistic";
}

Family parse_family(std::string_view name)
{
    if (name == "gaussian") {
        return Family::gaussian;
    }
    if (name == "logistic") {
        return Family::logistic;
    }
    throw Error(Errc::InvalidArgument, "unknown family '" + std::string(name) + "'");
}

namespace {

void check_shapes(const Matrix& design, const Vector& y)
{
    if (design.rows() != y.size()) {
        throw Error(Errc::DimensionMismatch, "design has " + std::to_string(design.rows())
                                                 + " rows, response has " + std::to_string(y.size()));
    }
    if (design.rows() == 0) {
        throw Error(Errc::InvalidArgument, "empty design");
    }
    if (!design.allFinite() || !y.allFinite()) {
        throw Error(Errc::NonFinite, "design or response has non-finite entries");
    }
}

Vector ordered_column_means(const Matrix& a)
{
    Vector m(a.cols());
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
        double s = 0.0;
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
            s += a(i, j);
        }
        m(j) = s / static_cast<double>(a.rows());
    }
    return m;
}

double ordered_mean(const Vector& v)
{
    double s = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        s += v(i);
    }
    return s / static_cast<double>(v.size());
}

} // namespace

double lambda_max(const Matrix& design, const Vector& y, Family family)
{
    check_shapes(design, y);
    (void)family;
    const auto n = static_cast<double>(design.rows());
    const Vector xbar = ordered_column_means(design);
    const Vector yc = y.array() - ordered_mean(y);
    double top = 0.0;
    for (Eigen::Index j = 0; j < design.cols(); ++j) {
        const Vector xc = design.col(j).array() - xbar(j);
        top = std::max(top, std::abs(ordered_dot(xc.data(), yc.data(), xc.size())) / n);
    }
    return top;
}

LassoFit fista_lasso(const Matrix& design, const Vector& y, double lambda, Family family,
                     const SolverOptions& options)
{
    check_shapes(design, y);
    const auto n = static_cast<double>(design.rows());
    const Vector xbar = ordered_column_means(design);
    const Matrix xc = design.rowwise() - xbar.transpose();

    LassoFit fit;
    fit.family = family;
    fit.lambda = lambda;
    if (family == Family::gaussian) {
        const double ybar = ordered_mean(y);
        const Vector yc = y.array() - ybar;
        const Matrix g = detail::ordered_gram(xc, n);
        Vector c(xc.cols());
        for (Eigen::Index j = 0; j < xc.cols(); ++j) {
            c(j) = ordered_dot(xc.col(j).data(), yc.data(), xc.rows()) / n;
        }
        detail::QuadraticPath path(g, c, options);
        path.solve(lambda);
        fit.coefficients = path.beta();
        fit.intercept = ybar - xbar.dot(fit.coefficients);
        fit.iterations = path.iterations();
        fit.converged = path.converged();
    } else {
        detail::LogisticPath path(xc, y, options);
        path.solve(lambda);
        fit.coefficients = path.beta();
        fit.intercept = path.intercept() - xbar.dot(fit.coefficients);
        fit.iterations = path.iterations();
        fit.converged = path.converged();
    }
    return fit;
}

double lasso_objective(const Matrix& design, const Vector& y, const LassoFit& fit)
{
    check_shapes(design, y);
    const auto n = static_cast<double>(design.rows());
    const Vector eta = (design * fit.coefficients).array() + fit.intercept;
    double loss = 0.0;
    if (fit.family == Family::gaussian) {
        loss = 0.5 * (y - eta).squaredNorm() / n;
    } else {
        for (Eigen::Index i = 0; i < eta.size(); ++i) {
            loss += detail::log1pexp(eta(i)) - y(i) * eta(i);
        }
        loss /= n;
    }
    return loss + fit.lambda * fit.coefficients.lpNorm<1>();
}

double kkt_residual(const Matrix& design, const Vector& y, const LassoFit& fit)
{
    check_shapes(design, y);
    const auto n = static_cast<double>(design.rows());
    const Vector eta = (design * fit.coefficients).array() + fit.intercept;
    Vector r(eta.size());
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
        const double mu = fit.family == Family::gaussian ? eta(i)
                                                         : 1.0 / (1.0 + std::exp(-eta(i)));
        r(i) = mu - y(i);
    }
    double worst = std::abs(r.sum()) / n;
    const Vector g = design.transpose() * r / n;
    for (Eigen::Index j = 0; j < g.size(); ++j) {
        worst = std::max(worst, detail::coordinate_kkt(fit.coefficients(j), g(j), fit.lambda));
    }
    return worst;
}

} // namespace dkn
