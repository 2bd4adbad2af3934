#include "dkn/knockoffs/fixed_x.hpp"

#include "dkn/error.hpp"
#include "dkn/knockoffs/gaussian_model.hpp"
#include "dkn/numerics/tolerances.hpp"

#include <cmath>
#include <string>

namespace dkn {

FixedXDesign::FixedXDesign(Matrix X, std::optional<Vector> s) : x_(std::move(X))
{
    const Eigen::Index n = x_.rows();
    const Eigen::Index p = x_.cols();
    if (p == 0 || n < 2 * p) {
        throw Error(Errc::TooFewRows, "fixed-X knockoffs need n >= 2p (n=" + std::to_string(n)
                                          + ", p=" + std::to_string(p) + ")");
    }
    gram_ = x_.transpose() * x_;
    gram_ = 0.5 * (gram_ + gram_.transpose());

    Eigen::HouseholderQR<Matrix> qr(x_);
    const Matrix r = qr.matrixQR().topRows(p).triangularView<Eigen::Upper>();
    const double rmax = r.diagonal().cwiseAbs().maxCoeff();
    if (!(r.diagonal().cwiseAbs().minCoeff() > 1e-10 * rmax)) {
        throw Error(Errc::RankDeficientX, "design matrix is numerically rank deficient");
    }
    basis_ = qr.householderQ() * Matrix::Identity(n, p);

    std::optional<SpdMatrix> gram_spd;
    try {
        gram_spd.emplace(gram_);
    } catch (const Error&) {
        throw Error(Errc::RankDeficientX, "Gram matrix is not positive definite");
    }
    if (s) {
        s_ = std::move(*s);
        if (s_.size() != p) {
            throw Error(Errc::DimensionMismatch, "s has wrong length");
        }
        if ((s_.array() < 0.0).any()) {
            throw Error(Errc::InvalidArgument, "knockoff diagonal s must be nonnegative");
        }
    } else {
        try {
            s_ = equicorrelated_s(gram_);
        } catch (const Error& e) {
            if (e.code() == Errc::DegenerateCovariance) {
                throw Error(Errc::RankDeficientX, e.what());
            }
            throw;
        }
    }

    const Matrix inv_s = gram_spd->solve(Matrix(s_.asDiagonal()));
    projected_ = x_ - x_ * inv_s;
    Matrix residual = Matrix(s_.asDiagonal()) * 2.0 - s_.asDiagonal() * inv_s;
    residual = 0.5 * (residual + residual.transpose());
    residual_root_ = psd_sqrt(residual);
}

Matrix random_orthogonal_complement(const FixedXDesign& design, RngStream& stream)
{
    const auto n = static_cast<Eigen::Index>(design.rows());
    const auto p = static_cast<Eigen::Index>(design.cols());
    const Matrix& q = design.column_basis();
    for (std::size_t attempt = 0; attempt <= kTolerances.fixed_x_redraws; ++attempt) {
        Matrix g(n, p);
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < p; ++j) {
                g(i, j) = stream.normal();
            }
        }
        // Two projection passes keep the leakage into col(X) at rounding level.
        g -= q * (q.transpose() * g);
        g -= q * (q.transpose() * g);

        Eigen::HouseholderQR<Matrix> qr(g);
        const Vector rdiag = qr.matrixQR().diagonal().head(p);
        const double rmax = rdiag.cwiseAbs().maxCoeff();
        if (!(rdiag.cwiseAbs().minCoeff() > 1e-8 * rmax)) {
            continue;
        }
        Matrix u = qr.householderQ() * Matrix::Identity(n, p);
        // Positive diagonal of R makes U Haar-distributed on the complement.
        for (Eigen::Index j = 0; j < p; ++j) {
            if (rdiag(j) < 0.0) {
                u.col(j) *= -1.0;
            }
        }
        u -= q * (q.transpose() * u);
        return u;
    }
    throw Error(Errc::RankDeficientX, "could not draw an orthonormal complement of col(X)");
}

Matrix fixed_x_knockoff(const FixedXDesign& design, RngStream& stream)
{
    const Matrix u = random_orthogonal_complement(design, stream);
    return design.projected() - u * design.residual_root();
}

} // namespace dkn
