#include "dkn/extensions/multienv.hpp"

#include "dkn/error.hpp"
#include "dkn/numerics/binomial.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace dkn {

namespace {

double sign_of(double v) noexcept
{
    return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0);
}

} // namespace

ImportanceVector multienv_statistic_cst(const MultiEnvStatistics& s)
{
    if (s.w.rows() == 0) {
        throw Error(Errc::InvalidArgument, "at least one environment is required");
    }
    ImportanceVector out;
    out.statistic_id = "mekf_cst";
    out.w.resize(s.w.cols());
    for (Eigen::Index j = 0; j < s.w.cols(); ++j) {
        double sign = 1.0;
        double mag = 1.0;
        for (Eigen::Index e = 0; e < s.w.rows(); ++e) {
            sign = std::min(sign, sign_of(s.w(e, j)));
            mag *= std::abs(s.w(e, j));
        }
        out.w(j) = sign * mag;
    }
    return out;
}

ImportanceVector multienv_statistic_pcst(const MultiEnvStatistics& s, std::size_t r, RngStream& stream)
{
    const auto env = static_cast<std::size_t>(s.w.rows());
    if (r < 1 || r > env) {
        throw Error(Errc::InvalidArgument, "r must lie in [1, E]");
    }
    ImportanceVector out;
    out.statistic_id = "mekf_pcst";
    out.w.resize(s.w.cols());
    std::vector<double> mags(env);
    for (Eigen::Index j = 0; j < s.w.cols(); ++j) {
        long negatives = 0;
        long zeros = 0;
        for (std::size_t e = 0; e < env; ++e) {
            const double v = s.w(static_cast<Eigen::Index>(e), j);
            negatives += v < 0.0;
            zeros += v == 0.0;
            mags[e] = std::abs(v);
        }
        const long m = std::max(static_cast<long>(env) - static_cast<long>(r) + 1 - zeros, 0L);
        const double u = stream.uniform();
        const double pj = binom_cdf_pmf(negatives - 1, m, 0.5).cdf + u * binom_cdf_pmf(negatives, m, 0.5).pmf;

        std::sort(mags.begin(), mags.end());
        double mag = 1.0;
        for (std::size_t e = 0; e < r; ++e) {
            mag *= mags[e];
        }
        out.w(j) = sign_of(0.5 - pj) * mag;
    }
    return out;
}

DerandomizedResult derandomized_mekf(const std::vector<Environment>& envs, const Statistic& statistic,
                                     const MekfOptions& options)
{
    if (envs.empty()) {
        throw Error(Errc::InvalidArgument, "at least one environment is required");
    }
    if (options.derandomize.runs == 0) {
        throw Error(Errc::InvalidArgument, "M must be at least 1");
    }
    const Eigen::Index p = envs.front().X.cols();
    for (std::size_t e = 0; e < envs.size(); ++e) {
        const auto& env = envs[e];
        if (env.X.cols() != p || static_cast<Eigen::Index>(env.model.dim()) != p) {
            throw Error(Errc::EnvDimensionMismatch, "environment " + std::to_string(e) + " has a different p");
        }
        if (env.y.size() != env.X.rows()) {
            throw Error(Errc::DimensionMismatch, "environment " + std::to_string(e) + " response length");
        }
    }
    if (options.mode == MekfMode::pcst && (options.r < 1 || options.r > envs.size())) {
        throw Error(Errc::InvalidArgument, "r must lie in [1, E]");
    }
    const DerandomizeOptions& d = options.derandomize;
    const auto stats = compute_run_statistics(d.runs, d.master_seed, d.workers, [&](std::size_t, const RngStream& run) {
        MultiEnvStatistics s;
        s.w.resize(static_cast<Eigen::Index>(envs.size()), p);
        for (std::size_t e = 0; e < envs.size(); ++e) {
            RngStream knock = env_stream(run, stream_purpose::knockoff, e);
            RngStream stat = env_stream(run, stream_purpose::statistic, e);
            const Matrix xt = sample_knockoff_mx(envs[e].model, envs[e].X, knock);
            s.w.row(static_cast<Eigen::Index>(e)) = statistic(envs[e].X, xt, envs[e].y, stat).w.transpose();
        }
        if (options.mode == MekfMode::cst) {
            return multienv_statistic_cst(s);
        }
        RngStream coins = run.substream(stream_purpose::pcst);
        return multienv_statistic_pcst(s, options.r, coins);
    });
    DerandomizedResult out = aggregate_statistics(stats, d);
    out.selection.method = options.mode == MekfMode::cst ? "mekf_cst" : "mekf_pcst";
    return out;
}

} // namespace dkn
