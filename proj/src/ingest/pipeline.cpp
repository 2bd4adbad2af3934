#include "dkn/ingest/pipeline.hpp"

#include "dkn/error.hpp"
#include "dkn/filter/derandomized.hpp"
#include "dkn/harness/data.hpp"
#include "dkn/knockoffs/gaussian_model.hpp"
#include "dkn/stats/importance.hpp"

#include <cstdio>

namespace dkn {

RealDataSummary real_data_pipeline(const Dataset& ds, const RealDataOptions& options)
{
    if (options.runs == 0 || options.reruns == 0) {
        throw Error(Errc::InvalidArgument, "runs and reruns must be positive");
    }
    if (ds.X.rows() != ds.y.size()) {
        throw Error(Errc::DimensionMismatch, "X and y have different row counts");
    }
    const GaussianModel model = second_order_model(ds.X);
    const Statistic statistic = make_lcd_statistic(options.family, options.cv);
    const auto p = static_cast<std::size_t>(ds.X.cols());

    RealDataSummary out;
    out.feature_names = ds.feature_names;
    out.freq_original = Vector::Zero(static_cast<Eigen::Index>(p));
    out.freq_derandomized = Vector::Zero(static_cast<Eigen::Index>(p));
    for (std::size_t k = 0; k < options.reruns; ++k) {
        DerandomizeOptions opt;
        opt.alpha_kn = options.alpha_kn;
        opt.alpha_ebh = options.alpha_ebh;
        opt.offset_c = options.offset_c;
        opt.early_stop = options.early_stop;
        opt.runs = options.runs;
        opt.master_seed = rerun_seed(options.master_seed, 0, k);
        opt.workers = options.workers;
        opt.keep_runs = true;
        const DerandomizedResult res = derandomized_knockoffs(ds.X, ds.y, model, statistic, opt);

        RealDataRun run;
        run.rerun = k;
        run.seed = opt.master_seed;
        run.derandomized = res.selection.selected;
        run.original = knockoff_filter(res.statistics.front().w, options.alpha_ebh).selected;
        for (const std::size_t j : run.original) {
            out.freq_original(static_cast<Eigen::Index>(j)) += 1.0;
        }
        for (const std::size_t j : run.derandomized) {
            out.freq_derandomized(static_cast<Eigen::Index>(j)) += 1.0;
        }
        out.runs.push_back(std::move(run));
    }
    out.freq_original /= static_cast<double>(options.reruns);
    out.freq_derandomized /= static_cast<double>(options.reruns);
    return out;
}

void write_frequencies_csv(std::ostream& out, const RealDataSummary& summary)
{
    out << "feature_name,freq_original,freq_derandomized\n";
    char buf[64];
    for (std::size_t j = 0; j < summary.feature_names.size(); ++j) {
        const auto i = static_cast<Eigen::Index>(j);
        std::snprintf(buf, sizeof buf, ",%.17g,%.17g\n", summary.freq_original(i), summary.freq_derandomized(i));
        out << summary.feature_names[j] << buf;
    }
}

nlohmann::json to_json(const RealDataSummary& summary)
{
    auto names = [&](const std::vector<std::size_t>& sel) {
        std::vector<std::string> v;
        for (const std::size_t j : sel) {
            v.push_back(summary.feature_names[j]);
        }
        return v;
    };
    nlohmann::json runs = nlohmann::json::array();
    for (const auto& r : summary.runs) {
        runs.push_back({{"rerun", r.rerun},
                        {"seed", r.seed},
                        {"original", {{"count", r.original.size()}, {"selected", names(r.original)}}},
                        {"derandomized", {{"count", r.derandomized.size()}, {"selected", names(r.derandomized)}}}});
    }
    nlohmann::json freq = nlohmann::json::array();
    for (std::size_t j = 0; j < summary.feature_names.size(); ++j) {
        const auto i = static_cast<Eigen::Index>(j);
        freq.push_back({{"feature", summary.feature_names[j]},
                        {"freq_original", summary.freq_original(i)},
                        {"freq_derandomized", summary.freq_derandomized(i)}});
    }
    return {{"runs", runs}, {"frequencies", freq}};
}

} // namespace dkn
