#include "dkn/stats/lasso.hpp"

#include "lasso_engine.hpp"

#include "dkn/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace dkn {

namespace {

using detail::ordered_dot;

// Columns with a training standard deviation below this are held at zero.
constexpr double kConstantColumn = 1e-12;
// Logistic paths stop refining once this fraction of null deviance is explained.
constexpr double kSaturatedDeviance = 0.999;

struct Moments {
    double count = 0.0;
    Matrix sxx;
    Vector sx;
    Vector sxy;
    double sy = 0.0;
};

Moments moments_of(const Matrix& xc, const Vector& y, const std::vector<Eigen::Index>& rows)
{
    const Eigen::Index q = xc.cols();
    const auto k = static_cast<Eigen::Index>(rows.size());
    Matrix block(k, q);
    Vector yb(k);
    for (Eigen::Index r = 0; r < k; ++r) {
        block.row(r) = xc.row(rows[r]);
        yb(r) = y(rows[r]);
    }
    Moments m;
    m.count = static_cast<double>(k);
    m.sxx = detail::ordered_gram(block, 1.0);
    m.sx.resize(q);
    m.sxy.resize(q);
    for (Eigen::Index j = 0; j < q; ++j) {
        double s = 0.0;
        for (Eigen::Index r = 0; r < k; ++r) {
            s += block(r, j);
        }
        m.sx(j) = s;
        m.sxy(j) = ordered_dot(block.col(j).data(), yb.data(), k);
    }
    double s = 0.0;
    for (Eigen::Index r = 0; r < k; ++r) {
        s += yb(r);
    }
    m.sy = s;
    return m;
}

// Standardized quadratic problem for one training split.
struct Standardized {
    Matrix gram;
    Vector c;
    Vector mean;
    Vector sd;
    std::vector<bool> active;
    double ybar = 0.0;
};

Standardized standardize(const Moments& m)
{
    const Eigen::Index q = m.sx.size();
    Standardized s;
    s.mean = m.sx / m.count;
    s.ybar = m.sy / m.count;
    s.sd.resize(q);
    s.active.assign(static_cast<std::size_t>(q), true);
    for (Eigen::Index j = 0; j < q; ++j) {
        const double var = m.sxx(j, j) / m.count - s.mean(j) * s.mean(j);
        if (var > kConstantColumn * kConstantColumn) {
            s.sd(j) = std::sqrt(var);
        } else {
            s.sd(j) = 1.0;
            s.active[static_cast<std::size_t>(j)] = false;
        }
    }
    s.gram.resize(q, q);
    s.c.resize(q);
    for (Eigen::Index k = 0; k < q; ++k) {
        const bool ak = s.active[static_cast<std::size_t>(k)];
        s.c(k) = ak ? (m.sxy(k) / m.count - s.mean(k) * s.ybar) / s.sd(k) : 0.0;
        for (Eigen::Index j = 0; j < q; ++j) {
            const bool aj = s.active[static_cast<std::size_t>(j)];
            s.gram(j, k) = (aj && ak)
                               ? (m.sxx(j, k) / m.count - s.mean(j) * s.mean(k)) / (s.sd(j) * s.sd(k))
                               : 0.0;
        }
    }
    return s;
}

// Training split standardized explicitly, for the logistic family.
struct StandardizedDesign {
    Matrix z;
    Vector y;
    Vector mean;
    Vector sd;
};

StandardizedDesign standardize_rows(const Matrix& xc, const Vector& y,
                                    const std::vector<Eigen::Index>& rows)
{
    const Eigen::Index q = xc.cols();
    const auto k = static_cast<Eigen::Index>(rows.size());
    StandardizedDesign s;
    s.z.resize(k, q);
    s.y.resize(k);
    for (Eigen::Index r = 0; r < k; ++r) {
        s.z.row(r) = xc.row(rows[r]);
        s.y(r) = y(rows[r]);
    }
    s.mean.resize(q);
    s.sd.resize(q);
    for (Eigen::Index j = 0; j < q; ++j) {
        double sum = 0.0;
        for (Eigen::Index r = 0; r < k; ++r) {
            sum += s.z(r, j);
        }
        const double mean = sum / static_cast<double>(k);
        double ss = 0.0;
        for (Eigen::Index r = 0; r < k; ++r) {
            const double d = s.z(r, j) - mean;
            ss += d * d;
        }
        const double sd = std::sqrt(ss / static_cast<double>(k));
        s.mean(j) = mean;
        if (sd > kConstantColumn) {
            s.sd(j) = sd;
            for (Eigen::Index r = 0; r < k; ++r) {
                s.z(r, j) = (s.z(r, j) - mean) / sd;
            }
        } else {
            s.sd(j) = 1.0;
            s.z.col(j).setZero();
        }
    }
    return s;
}

double predict(const Matrix& xc, Eigen::Index row, double offset, const Vector& mean,
               const Vector& sd, const Vector& beta)
{
    double eta = offset;
    for (Eigen::Index j = 0; j < beta.size(); ++j) {
        if (beta(j) != 0.0) {
            eta += (xc(row, j) - mean(j)) / sd(j) * beta(j);
        }
    }
    return eta;
}

std::vector<double> lambda_grid(double top, std::size_t count, double ratio)
{
    std::vector<double> grid(count);
    if (count == 1) {
        grid[0] = top;
        return grid;
    }
    const double step = std::log(ratio) / static_cast<double>(count - 1);
    for (std::size_t k = 0; k < count; ++k) {
        grid[k] = top * std::exp(step * static_cast<double>(k));
    }
    grid[0] = top;
    return grid;
}

} // namespace

LassoFit cv_lasso(const Matrix& design, const Vector& y, Family family, const CvOptions& options,
                  RngStream& stream, CvCurve* curve)
{
    const Eigen::Index n = design.rows();
    const Eigen::Index q = design.cols();
    if (y.size() != n) {
        throw Error(Errc::DimensionMismatch, "design has " + std::to_string(n) + " rows, response has "
                                                 + std::to_string(y.size()));
    }
    if (options.folds < 2 || options.folds > static_cast<std::size_t>(n)) {
        throw Error(Errc::InvalidArgument, "folds must lie in [2, n]");
    }
    if (options.grid == 0) {
        throw Error(Errc::InvalidArgument, "lambda grid must be non-empty");
    }
    if (!design.allFinite() || !y.allFinite()) {
        throw Error(Errc::NonFinite, "design or response has non-finite entries");
    }
    const std::size_t folds = options.folds;

    std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), Eigen::Index{0});
    for (std::size_t i = perm.size() - 1; i > 0; --i) {
        const auto j = static_cast<std::size_t>(stream.uniform_index(i + 1));
        std::swap(perm[i], perm[j]);
    }
    std::vector<std::size_t> fold_of(static_cast<std::size_t>(n));
    std::vector<std::vector<Eigen::Index>> members(folds);
    std::vector<std::vector<Eigen::Index>> training(folds);
    for (std::size_t pos = 0; pos < perm.size(); ++pos) {
        fold_of[static_cast<std::size_t>(perm[pos])] = pos % folds;
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        const std::size_t f = fold_of[static_cast<std::size_t>(i)];
        members[f].push_back(i);
        for (std::size_t g = 0; g < folds; ++g) {
            if (g != f) {
                training[g].push_back(i);
            }
        }
    }

    // Centering by the full-data means keeps the moment updates well conditioned.
    Vector xbar(q);
    for (Eigen::Index j = 0; j < q; ++j) {
        double s = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            s += design(i, j);
        }
        xbar(j) = s / static_cast<double>(n);
    }
    const Matrix xc = design.rowwise() - xbar.transpose();
    std::vector<Eigen::Index> all_rows(static_cast<std::size_t>(n));
    std::iota(all_rows.begin(), all_rows.end(), Eigen::Index{0});

    LassoFit fit;
    fit.family = family;

    std::vector<Moments> fold_moments;
    Moments total;
    if (family == Family::gaussian) {
        for (std::size_t f = 0; f < folds; ++f) {
            fold_moments.push_back(moments_of(xc, y, members[f]));
        }
        total = moments_of(xc, y, all_rows);
    }

    double top = 0.0;
    Standardized full_q;
    StandardizedDesign full_l;
    if (family == Family::gaussian) {
        full_q = standardize(total);
        top = full_q.c.size() ? full_q.c.cwiseAbs().maxCoeff() : 0.0;
    } else {
        full_l = standardize_rows(xc, y, all_rows);
        const double ybar = full_l.y.mean();
        const Vector yc = full_l.y.array() - ybar;
        for (Eigen::Index j = 0; j < q; ++j) {
            top = std::max(top, std::abs(ordered_dot(full_l.z.col(j).data(), yc.data(), n))
                                    / static_cast<double>(n));
        }
    }
    if (!(top > 0.0)) {
        // Constant response: the empty model is optimal at every penalty.
        fit.coefficients = Vector::Zero(q);
        fit.intercept = y.mean();
        fit.converged = true;
        return fit;
    }
    const double ratio = n > q ? 1e-4 : 1e-2;
    const std::vector<double> grid = lambda_grid(top, options.grid, ratio);
    std::vector<double> error(grid.size(), 0.0);

    for (std::size_t f = 0; f < folds; ++f) {
        if (family == Family::gaussian) {
            Moments train;
            train.count = total.count - fold_moments[f].count;
            train.sxx = total.sxx - fold_moments[f].sxx;
            train.sx = total.sx - fold_moments[f].sx;
            train.sxy = total.sxy - fold_moments[f].sxy;
            train.sy = total.sy - fold_moments[f].sy;
            const Standardized s = standardize(train);
            detail::QuadraticPath path(s.gram, s.c, options.solver);
            for (std::size_t k = 0; k < grid.size(); ++k) {
                path.solve(grid[k]);
                double sse = 0.0;
                for (const Eigen::Index i : members[f]) {
                    const double r = y(i) - predict(xc, i, s.ybar, s.mean, s.sd, path.beta());
                    sse += r * r;
                }
                error[k] += sse;
            }
        } else {
            const StandardizedDesign s = standardize_rows(xc, y, training[f]);
            if (s.y.minCoeff() == s.y.maxCoeff()) {
                throw Error(Errc::InvalidArgument, "a training fold contains a single class");
            }
            detail::LogisticPath path(s.z, s.y, options.solver);
            bool saturated = false;
            for (std::size_t k = 0; k < grid.size(); ++k) {
                if (!saturated) {
                    path.solve(grid[k]);
                    saturated = path.deviance() <= (1.0 - kSaturatedDeviance) * path.null_deviance();
                }
                double dev = 0.0;
                for (const Eigen::Index i : members[f]) {
                    const double eta = predict(xc, i, path.intercept(), s.mean, s.sd, path.beta());
                    dev += detail::log1pexp(eta) - y(i) * eta;
                }
                error[k] += 2.0 * dev;
            }
        }
    }
    for (double& e : error) {
        e /= static_cast<double>(n);
    }
    std::size_t best = 0;
    for (std::size_t k = 1; k < error.size(); ++k) {
        if (error[k] < error[best]) {
            best = k;
        }
    }

    Vector beta;
    Vector mean;
    Vector sd;
    double offset = 0.0;
    if (family == Family::gaussian) {
        detail::QuadraticPath path(full_q.gram, full_q.c, options.solver);
        fit.converged = true;
        for (std::size_t k = 0; k <= best; ++k) {
            path.solve(grid[k]);
            fit.iterations += path.iterations();
            fit.converged = fit.converged && path.converged();
        }
        beta = path.beta();
        mean = full_q.mean;
        sd = full_q.sd;
        offset = full_q.ybar;
    } else {
        detail::LogisticPath path(full_l.z, full_l.y, options.solver);
        fit.converged = true;
        for (std::size_t k = 0; k <= best; ++k) {
            path.solve(grid[k]);
            fit.iterations += path.iterations();
            fit.converged = fit.converged && path.converged();
            if (path.deviance() <= (1.0 - kSaturatedDeviance) * path.null_deviance()) {
                break;
            }
        }
        beta = path.beta();
        mean = full_l.mean;
        sd = full_l.sd;
        offset = path.intercept();
    }
    fit.lambda = grid[best];
    fit.coefficients.resize(q);
    double shift = 0.0;
    for (Eigen::Index j = 0; j < q; ++j) {
        fit.coefficients(j) = beta(j) / sd(j);
        shift += fit.coefficients(j) * (xbar(j) + mean(j));
    }
    fit.intercept = offset - shift;

    if (curve) {
        curve->lambdas = grid;
        curve->error = error;
        curve->best = best;
        curve->fold_of = fold_of;
    }
    return fit;
}

} // namespace dkn
