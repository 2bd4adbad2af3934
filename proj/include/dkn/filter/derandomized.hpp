#pragma once

#include "dkn/filter/ebh.hpp"
#include "dkn/filter/evalues.hpp"
#include "dkn/filter/threshold.hpp"
#include "dkn/knockoffs/gaussian_model.hpp"
#include "dkn/numerics/rng.hpp"
#include "dkn/stats/importance.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace dkn {

struct DerandomizeOptions {
    double alpha_kn = 0.05;
    double alpha_ebh = 0.1;
    double offset_c = 1.0;
    bool early_stop = true;
    std::size_t runs = 50;  // M
    std::uint64_t master_seed = 0;
    unsigned workers = 1;
    bool keep_runs = false;  // retain per-run statistics, thresholds and e-values
};

struct DerandomizedResult {
    SelectionResult selection;
    EValueVector e_avg;
    std::vector<ImportanceVector> statistics;
    std::vector<ThresholdResult> thresholds;
    std::vector<EValueVector> run_evalues;
};

/// Stream of run m (0-based); stream_id is m + 1.
RngStream run_stream(std::uint64_t master_seed, std::size_t m) noexcept;

/// Substream of a run for `purpose` in environment `env`. Single-environment
/// procedures use env 0.
RngStream env_stream(const RngStream& run, std::uint64_t purpose, std::size_t env) noexcept;

/// W^{(m)} for run m given that run's stream.
using RunStatistic = std::function<ImportanceVector(std::size_t m, const RngStream& run)>;

/// Evaluates every run on up to `workers` threads; slot m always holds run m.
std::vector<ImportanceVector> compute_run_statistics(std::size_t runs, std::uint64_t master_seed,
                                                     unsigned workers, const RunStatistic& fn);

/// Thresholds each W^{(m)} (offset c, optional early stop), forms e^{(m)},
/// averages in run order and applies e-BH at alpha_ebh. Only alpha_kn,
/// alpha_ebh, offset_c, early_stop and keep_runs are read from `options`.
DerandomizedResult aggregate_statistics(const std::vector<ImportanceVector>& statistics,
                                        const DerandomizeOptions& options);

/// Derandomized model-X knockoffs: for each run m, X̃^{(m)} is drawn from the
/// run's knockoff substream and W^{(m)} computed with its statistic substream.
/// Output does not depend on `workers`.
DerandomizedResult derandomized_knockoffs(const Matrix& X, const Vector& y, const GaussianModel& model,
                                          const Statistic& statistic, const DerandomizeOptions& options);

/// The knockoff copy used by run m of derandomized_knockoffs.
Matrix run_knockoff_mx(const GaussianModel& model, const Matrix& X, std::uint64_t master_seed, std::size_t m);

/// Mean of equally sized e-value vectors, summed in the given order.
EValueVector average_evalues(const std::vector<EValueVector>& runs);

} // namespace dkn
