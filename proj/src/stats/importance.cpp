#include "dkn/stats/importance.hpp"

#include "dkn/error.hpp"

#include <cmath>

namespace dkn {

ImportanceVector lcd_statistic(const Matrix& X, const Matrix& Xt, const Vector& y, Family family,
                               RngStream& stream, const CvOptions& cv)
{
    if (X.rows() != Xt.rows() || X.cols() != Xt.cols()) {
        throw Error(Errc::DimensionMismatch, "X and Xt shapes differ");
    }
    const Eigen::Index p = X.cols();
    Matrix augmented(X.rows(), 2 * p);
    augmented << X, Xt;
    const LassoFit fit = cv_lasso(augmented, y, family, cv, stream);
    ImportanceVector out;
    out.statistic_id = "lcd";
    out.w.resize(p);
    for (Eigen::Index j = 0; j < p; ++j) {
        out.w(j) = std::abs(fit.coefficients(j)) - std::abs(fit.coefficients(j + p));
    }
    return out;
}

Statistic make_lcd_statistic(Family family, CvOptions cv)
{
    return [family, cv](const Matrix& X, const Matrix& Xt, const Vector& y, RngStream& stream) {
        return lcd_statistic(X, Xt, y, family, stream, cv);
    };
}

} // namespace dkn
