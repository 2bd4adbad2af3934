#pragma once

#include "dkn/knockoffs/gaussian_model.hpp"

#include <vector>

namespace dkn {

/// Empirical KL per feature and run, and its maximum over runs.
struct KlDiagnostic {
    std::vector<Vector> kl;  // kl[m](j)
    Vector kl_max;
};

/// kl[m](j) = Σ_i log[P_j(X_ij|X_i,−j)/Q_j(X_ij|X_i,−j) · Q_j(X̃_ij|X_i,−j)/P_j(X̃_ij|X_i,−j)],
/// with P = model_true, Q = model_used, and Gaussian conditionals read off the
/// precision matrices. Both conditionals are evaluated given the observed
/// X_i,−j. Throws DegenerateConditional if a conditional variance is not
/// positive, DimensionMismatch on shape errors.
KlDiagnostic empirical_kl(const GaussianModel& model_true, const GaussianModel& model_used, const Matrix& X,
                          const std::vector<Matrix>& xt_runs);

} // namespace dkn
