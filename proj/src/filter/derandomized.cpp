#include "dkn/filter/derandomized.hpp"

#include "dkn/error.hpp"
#include "dkn/numerics/parallel.hpp"

#include <string>

namespace dkn {

RngStream run_stream(std::uint64_t master_seed, std::size_t m) noexcept
{
    return RngStream(master_seed, static_cast<std::uint64_t>(m) + 1);
}

RngStream env_stream(const RngStream& run, std::uint64_t purpose, std::size_t env) noexcept
{
    return run.substream(purpose).substream(static_cast<std::uint64_t>(env));
}

std::vector<ImportanceVector> compute_run_statistics(std::size_t runs, std::uint64_t master_seed,
                                                     unsigned workers, const RunStatistic& fn)
{
    std::vector<ImportanceVector> out(runs);
    parallel_for(runs, workers, [&](std::size_t m) {
        out[m] = fn(m, run_stream(master_seed, m));
        out[m].run_index = m;
    });
    return out;
}

EValueVector average_evalues(const std::vector<EValueVector>& runs)
{
    if (runs.empty()) {
        throw Error(Errc::InvalidArgument, "no e-value vectors to average");
    }
    EValueVector out;
    out.p_dim = runs.front().p_dim;
    out.source = "averaged";
    out.e = Vector::Zero(runs.front().e.size());
    for (const auto& r : runs) {
        if (r.e.size() != out.e.size()) {
            throw Error(Errc::DimensionMismatch, "e-value vectors differ in length");
        }
        out.e += r.e;
    }
    out.e /= static_cast<double>(runs.size());
    return out;
}

DerandomizedResult aggregate_statistics(const std::vector<ImportanceVector>& statistics,
                                        const DerandomizeOptions& options)
{
    if (statistics.empty()) {
        throw Error(Errc::InvalidArgument, "at least one run is required");
    }
    if (!(options.alpha_ebh > 0.0 && options.alpha_ebh <= 1.0)) {
        throw Error(Errc::InvalidArgument, "alpha_ebh must lie in (0, 1]");
    }
    DerandomizedResult out;
    std::vector<EValueVector> evalues;
    evalues.reserve(statistics.size());
    const auto p = static_cast<std::size_t>(statistics.front().w.size());
    for (const auto& s : statistics) {
        if (static_cast<std::size_t>(s.w.size()) != p) {
            throw Error(Errc::DimensionMismatch, "statistics differ in length");
        }
        const ThresholdResult thr = knockoff_threshold(s.w, options.alpha_kn, options.offset_c, options.early_stop);
        evalues.push_back(knockoff_evalues(s.w, thr, p));
        if (options.keep_runs) {
            out.thresholds.push_back(thr);
        }
    }
    out.e_avg = average_evalues(evalues);
    out.selection = ebh(out.e_avg, options.alpha_ebh);
    out.selection.method = "derandomized";
    if (options.keep_runs) {
        out.statistics = statistics;
        out.run_evalues = std::move(evalues);
    }
    return out;
}

Matrix run_knockoff_mx(const GaussianModel& model, const Matrix& X, std::uint64_t master_seed, std::size_t m)
{
    RngStream knock = env_stream(run_stream(master_seed, m), stream_purpose::knockoff, 0);
    return sample_knockoff_mx(model, X, knock);
}

DerandomizedResult derandomized_knockoffs(const Matrix& X, const Vector& y, const GaussianModel& model,
                                          const Statistic& statistic, const DerandomizeOptions& options)
{
    if (options.runs == 0) {
        throw Error(Errc::InvalidArgument, "M must be at least 1");
    }
    if (static_cast<std::size_t>(X.cols()) != model.dim()) {
        throw Error(Errc::DimensionMismatch, "X has " + std::to_string(X.cols()) + " columns, model has "
                                                 + std::to_string(model.dim()));
    }
    const auto stats = compute_run_statistics(
        options.runs, options.master_seed, options.workers, [&](std::size_t, const RngStream& run) {
            RngStream knock = env_stream(run, stream_purpose::knockoff, 0);
            RngStream stat = env_stream(run, stream_purpose::statistic, 0);
            const Matrix xt = sample_knockoff_mx(model, X, knock);
            return statistic(X, xt, y, stat);
        });
    return aggregate_statistics(stats, options);
}

} // namespace dkn
