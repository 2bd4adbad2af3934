#include "dkn/extensions/fixed_x_derandomized.hpp"

#include "dkn/error.hpp"

namespace dkn {

Matrix run_knockoff_fixed_x(const FixedXDesign& design, std::uint64_t master_seed, std::size_t m)
{
    RngStream knock = env_stream(run_stream(master_seed, m), stream_purpose::knockoff, 0);
    return fixed_x_knockoff(design, knock);
}

DerandomizedResult derandomized_fixed_x(const FixedXDesign& design, const Vector& y,
                                        const Statistic& statistic, const DerandomizeOptions& options)
{
    if (options.runs == 0) {
        throw Error(Errc::InvalidArgument, "M must be at least 1");
    }
    if (static_cast<std::size_t>(y.size()) != design.rows()) {
        throw Error(Errc::DimensionMismatch, "response length differs from design rows");
    }
    const auto stats = compute_run_statistics(
        options.runs, options.master_seed, options.workers, [&](std::size_t, const RngStream& run) {
            RngStream knock = env_stream(run, stream_purpose::knockoff, 0);
            RngStream stat = env_stream(run, stream_purpose::statistic, 0);
            const Matrix xt = fixed_x_knockoff(design, knock);
            return statistic(design.X(), xt, y, stat);
        });
    DerandomizedResult out = aggregate_statistics(stats, options);
    out.selection.method = "derandomized_fixed_x";
    return out;
}

} // namespace dkn
