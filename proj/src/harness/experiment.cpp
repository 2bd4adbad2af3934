#include "dkn/harness/experiment.hpp"

#include "dkn/error.hpp"
#include "dkn/filter/derandomized.hpp"
#include "dkn/numerics/parallel.hpp"
#include "dkn/stats/importance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <tuple>

namespace dkn {

Selection apply_method(const std::string& method, const std::vector<ImportanceVector>& statistics,
                       const ExperimentConfig& cfg)
{
    if (statistics.empty()) {
        throw Error(Errc::InvalidArgument, "no statistics");
    }
    if (method == "original") {
        return knockoff_filter(statistics.front().w, cfg.alpha_ebh).selected;
    }
    if (method == "derandomized") {
        DerandomizeOptions opt;
        opt.alpha_kn = cfg.alpha_kn;
        opt.alpha_ebh = cfg.alpha_ebh;
        opt.offset_c = cfg.offset_c;
        opt.early_stop = cfg.early_stop;
        return aggregate_statistics(statistics, opt).selection.selected;
    }
    throw Error(Errc::ConfigInvalid, "unknown method '" + method + "'");
}

namespace {

double standard_error(const std::vector<double>& v)
{
    if (v.size() < 2) {
        return 0.0;
    }
    double mean = 0.0;
    for (const double x : v) {
        mean += x;
    }
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (const double x : v) {
        ss += (x - mean) * (x - mean);
    }
    return std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

} // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg, unsigned workers,
                                const std::function<void(const RerunStatistics&)>& observer)
{
    validate(cfg);
    ExperimentResult result;
    result.config = cfg;
    result.truth = experiment_truth(cfg);
    const GaussianModel model = experiment_model(cfg);
    const std::size_t runs_needed = std::find(cfg.methods.begin(), cfg.methods.end(), "derandomized")
                                            != cfg.methods.end()
                                        ? cfg.runs
                                        : 1;

    std::vector<SimulatedData> data(cfg.datasets);
    parallel_for(cfg.datasets, workers, [&](std::size_t d) {
        RngStream s = dataset_stream(cfg, d);
        data[d] = generate_dataset(cfg, s);
    });

    CvOptions cv;
    cv.folds = cfg.cv_folds;
    cv.grid = cfg.cv_grid;
    const Statistic statistic = make_lcd_statistic(cfg.family, cv);

    const std::size_t tasks = cfg.datasets * cfg.reruns;
    std::vector<RerunStatistics> stats(tasks);
    // Flatten (rerun, run) so that small D·K still spreads over workers.
    std::vector<std::vector<ImportanceVector>> flat(tasks, std::vector<ImportanceVector>(runs_needed));
    parallel_for(tasks * runs_needed, workers, [&](std::size_t idx) {
        const std::size_t task = idx / runs_needed;
        const std::size_t m = idx % runs_needed;
        const std::size_t d = task / cfg.reruns;
        const std::size_t k = task % cfg.reruns;
        const RngStream run = run_stream(rerun_seed(cfg.seed, d, k), m);
        RngStream knock = env_stream(run, stream_purpose::knockoff, 0);
        RngStream stat = env_stream(run, stream_purpose::statistic, 0);
        const Matrix xt = sample_knockoff_mx(model, data[d].X, knock);
        flat[task][m] = statistic(data[d].X, xt, data[d].y, stat);
        flat[task][m].run_index = m;
    });
    for (std::size_t task = 0; task < tasks; ++task) {
        stats[task].dataset = task / cfg.reruns;
        stats[task].rerun = task % cfg.reruns;
        stats[task].statistics = std::move(flat[task]);
        if (observer) {
            observer(stats[task]);
        }
    }

    for (const auto& method : cfg.methods) {
        SelectionTable table(cfg.datasets, std::vector<Selection>(cfg.reruns));
        std::vector<double> power_d(cfg.datasets, 0.0);
        std::vector<double> fdr_d(cfg.datasets, 0.0);
        double size_sum = 0.0;
        for (std::size_t task = 0; task < tasks; ++task) {
            const std::size_t d = stats[task].dataset;
            const std::size_t k = stats[task].rerun;
            RunRecord rec;
            rec.dataset = d;
            rec.rerun = k;
            rec.method = method;
            rec.selected = apply_method(method, stats[task].statistics, cfg);
            const SelectionScore sc = score_selection(rec.selected, result.truth);
            rec.power = sc.power;
            rec.fdp = sc.fdp;
            power_d[d] += sc.power / static_cast<double>(cfg.reruns);
            fdr_d[d] += sc.fdp / static_cast<double>(cfg.reruns);
            size_sum += static_cast<double>(rec.selected.size());
            table[d][k] = rec.selected;
            result.runs.push_back(std::move(rec));
        }
        MethodSummary ms;
        ms.method = method;
        for (std::size_t d = 0; d < cfg.datasets; ++d) {
            ms.power += power_d[d] / static_cast<double>(cfg.datasets);
            ms.fdr += fdr_d[d] / static_cast<double>(cfg.datasets);
        }
        ms.power_se = standard_error(power_d);
        ms.fdr_se = standard_error(fdr_d);
        ms.mean_size = size_sum / static_cast<double>(tasks);
        ms.variability = selection_variability(table, cfg.p);
        std::vector<Selection> all;
        for (const auto& row : table) {
            all.insert(all.end(), row.begin(), row.end());
        }
        ms.frequency = baseline_frequency(all, cfg.p);
        result.methods.push_back(std::move(ms));
    }
    std::stable_sort(result.runs.begin(), result.runs.end(), [](const RunRecord& a, const RunRecord& b) {
        return std::tie(a.dataset, a.rerun) < std::tie(b.dataset, b.rerun);
    });
    return result;
}

void write_runs_csv(std::ostream& out, const ExperimentResult& result)
{
    out << "dataset,rerun,method,size,power,fdp,selected\n";
    char buf[64];
    for (const auto& r : result.runs) {
        out << r.dataset << ',' << r.rerun << ',' << r.method << ',' << r.selected.size() << ',';
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,", r.power, r.fdp);
        out << buf;
        for (std::size_t i = 0; i < r.selected.size(); ++i) {
            out << (i ? ";" : "") << r.selected[i] + 1;
        }
        out << '\n';
    }
}

nlohmann::json summary_json(const ExperimentResult& result)
{
    nlohmann::json methods = nlohmann::json::object();
    for (const auto& m : result.methods) {
        methods[m.method] = {
            {"power", m.power},
            {"power_se", m.power_se},
            {"fdr", m.fdr},
            {"fdr_se", m.fdr_se},
            {"mean_selected", m.mean_size},
            {"marginal_variability", m.variability.marginal},
            {"conditional_variability", m.variability.conditional},
            {"selection_frequency", std::vector<double>(m.frequency.data(), m.frequency.data() + m.frequency.size())},
        };
    }
    std::vector<std::size_t> nonnulls;
    for (const std::size_t j : result.truth.nonnulls) {
        nonnulls.push_back(j + 1);
    }
    return {{"config", to_json(result.config)},
            {"seed", result.config.seed},
            {"error_bars", "plus/minus one standard error over datasets"},
            {"nonnulls", nonnulls},
            {"methods", methods}};
}

} // namespace dkn
