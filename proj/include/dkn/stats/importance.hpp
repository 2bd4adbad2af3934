#pragma once

#include "dkn/numerics/linalg.hpp"
#include "dkn/numerics/rng.hpp"
#include "dkn/stats/lasso.hpp"

#include <cstddef>
#include <functional>
#include <string>

namespace dkn {

/// Feature importance W from one knockoff realization. Contract: swapping
/// X_j with X̃_j negates w_j and leaves every other entry unchanged.
struct ImportanceVector {
    Vector w;
    std::string statistic_id;
    std::size_t run_index = 0;
};

/// W = 𝒲([X, X̃], y). The stream is the statistic's only randomness.
using Statistic =
    std::function<ImportanceVector(const Matrix& X, const Matrix& Xt, const Vector& y, RngStream& stream)>;

/// Lasso coefficient difference w_j = |β_j| − |β̃_j| from cv_lasso on the
/// augmented design [X, X̃]. Throws DimensionMismatch.
ImportanceVector lcd_statistic(const Matrix& X, const Matrix& Xt, const Vector& y, Family family,
                               RngStream& stream, const CvOptions& cv = {});

Statistic make_lcd_statistic(Family family, CvOptions cv = {});

} // namespace dkn
