#include "dkn/numerics/linalg.hpp"

#include "dkn/error.hpp"
#include "dkn/numerics/tolerances.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dkn {

namespace {

double max_abs(const Matrix& a)
{
    return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

void require_symmetric(const Matrix& a)
{
    if (a.rows() != a.cols()) {
        throw Error(Errc::NonSymmetric, "matrix is " + std::to_string(a.rows()) + "x"
                                            + std::to_string(a.cols()));
    }
    if (!is_symmetric(a, kTolerances.symmetry_rel)) {
        throw Error(Errc::NonSymmetric, "matrix is not symmetric");
    }
    if (!a.allFinite()) {
        throw Error(Errc::NonFinite, "matrix has non-finite entries");
    }
}

// Plain right-looking Cholesky on the lower triangle. Returns false on the
// first non-positive pivot.
bool try_cholesky(const Matrix& a, Matrix& l)
{
    const Eigen::Index n = a.rows();
    l = Matrix::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        double d = a(j, j);
        for (Eigen::Index k = 0; k < j; ++k) {
            d -= l(j, k) * l(j, k);
        }
        if (!(d > 0.0)) {
            return false;
        }
        const double ljj = std::sqrt(d);
        l(j, j) = ljj;
        for (Eigen::Index i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (Eigen::Index k = 0; k < j; ++k) {
                s -= l(i, k) * l(j, k);
            }
            l(i, j) = s / ljj;
        }
    }
    return true;
}

} // namespace

bool is_symmetric(const Matrix& a, double rel_tol)
{
    if (a.rows() != a.cols()) {
        return false;
    }
    const double scale = std::max(max_abs(a), 1e-300);
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = i + 1; j < a.cols(); ++j) {
            if (std::abs(a(i, j) - a(j, i)) > rel_tol * scale) {
                return false;
            }
        }
    }
    return true;
}

Matrix cholesky(const Matrix& a)
{
    require_symmetric(a);
    Matrix l;
    if (a.rows() > 64) {
        // Blocked factorization for larger inputs; same pivot criterion.
        Eigen::LLT<Matrix> llt(a);
        if (llt.info() != Eigen::Success) {
            throw Error(Errc::NotPositiveDefinite, "non-positive pivot in Cholesky factorization");
        }
        l = llt.matrixL();
        return l;
    }
    if (!try_cholesky(a, l)) {
        throw Error(Errc::NotPositiveDefinite, "non-positive pivot in Cholesky factorization");
    }
    return l;
}

double min_eigenvalue(const Matrix& a)
{
    require_symmetric(a);
    const Eigen::Index n = a.rows();
    if (n == 0) {
        throw Error(Errc::InvalidArgument, "min_eigenvalue of an empty matrix");
    }
    // Gershgorin interval brackets the spectrum.
    double lo = a(0, 0);
    double hi = a(0, 0);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double radius = a.row(i).cwiseAbs().sum() - std::abs(a(i, i));
        lo = std::min(lo, a(i, i) - radius);
        hi = std::min(hi, a(i, i));
    }
    const double scale = std::max(max_abs(a), 1e-300);
    const Matrix eye = Matrix::Identity(n, n);

    Eigen::LLT<Matrix> llt(n);
    auto feasible = [&](double shift) {
        // a − shift·I positive definite  ⇔  shift < λ_min
        llt.compute(a - shift * eye);
        return llt.info() == Eigen::Success;
    };

    // lo must be strictly feasible; widen a little to guarantee it.
    lo -= 1e-12 * scale + 1e-300;
    while (!feasible(lo)) {
        lo -= std::max(std::abs(lo), scale);
    }
    for (std::size_t it = 0; it < kTolerances.eigen_bisection_max_iter; ++it) {
        if (hi - lo <= kTolerances.eigen_bisection_rel * scale) {
            break;
        }
        const double mid = 0.5 * (lo + hi);
        if (feasible(mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

Matrix psd_sqrt(const Matrix& a)
{
    require_symmetric(a);
    Eigen::SelfAdjointEigenSolver<Matrix> es(a);
    Vector ev = es.eigenvalues();
    const double top = std::max(ev.cwiseAbs().maxCoeff(), 1e-300);
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev(i) < -kTolerances.psd_clip_rel * top) {
            throw Error(Errc::NotPositiveDefinite, "matrix has a negative eigenvalue "
                                                       + std::to_string(ev(i)));
        }
        ev(i) = std::sqrt(std::max(ev(i), 0.0));
    }
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

Matrix psd_factor(const Matrix& a)
{
    require_symmetric(a);
    Eigen::LLT<Matrix> llt(a);
    if (llt.info() == Eigen::Success) {
        return llt.matrixL();
    }
    return psd_sqrt(a);
}

Matrix ar1_covariance(std::size_t dim, double rho)
{
    const auto n = static_cast<Eigen::Index>(dim);
    Matrix s(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            s(i, j) = std::pow(rho, static_cast<double>(std::abs(i - j)));
        }
    }
    return s;
}

SpdMatrix::SpdMatrix(Matrix a) : a_(std::move(a)), l_(cholesky(a_)) {}

Matrix SpdMatrix::solve(const Matrix& b) const
{
    const auto lower = l_.triangularView<Eigen::Lower>();
    Matrix z = lower.solve(b);
    return lower.transpose().solve(z);
}

Matrix SpdMatrix::inverse() const
{
    return solve(Matrix::Identity(a_.rows(), a_.cols()));
}

} // namespace dkn
