#include "dkn/cli/cli.hpp"

#include "dkn/error.hpp"
#include "dkn/extensions/fixed_x_derandomized.hpp"
#include "dkn/extensions/multienv.hpp"
#include "dkn/extensions/robustness.hpp"
#include "dkn/extensions/side_info.hpp"
#include "dkn/filter/derandomized.hpp"
#include "dkn/filter/sharpness.hpp"
#include "dkn/harness/experiment.hpp"
#include "dkn/ingest/csv.hpp"
#include "dkn/ingest/pipeline.hpp"
#include "dkn/knockoffs/exchangeability.hpp"
#include "dkn/knockoffs/fixed_x.hpp"
#include "dkn/knockoffs/gaussian_model.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

namespace dkn {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Raised for problems with the invocation itself rather than the computation.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Artifact {
    std::string name;
    std::string content;
};

// Writes every artifact under `dir`; nothing is created before this point.
void write_artifacts(const std::string& dir, const std::vector<Artifact>& artifacts)
{
    fs::create_directories(dir);
    for (const auto& a : artifacts) {
        const fs::path path = fs::path(dir) / a.name;
        std::ofstream f(path, std::ios::binary);
        if (!f) {
            throw Error(Errc::FileUnreadable, "cannot write '" + path.string() + "'");
        }
        f << a.content;
        if (!f) {
            throw Error(Errc::FileUnreadable, "write failed for '" + path.string() + "'");
        }
    }
}

std::string dump(const json& j)
{
    return j.dump(2) + "\n";
}

std::vector<double> to_std(const Vector& v)
{
    return {v.data(), v.data() + v.size()};
}

// Runs prepare (usage errors → 2) then compute (errors → 1).
int run_phases(std::ostream& err, const std::string& command, const std::function<void()>& prepare,
               const std::function<void()>& compute)
{
    try {
        prepare();
    } catch (const std::exception& e) {
        err << "dkn " << command << ": " << e.what() << '\n';
        return kExitUsage;
    }
    try {
        compute();
    } catch (const std::exception& e) {
        err << "dkn " << command << ": " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitOk;
}

// Flags shared by select and diagnose.
struct FilterFlags {
    double alpha_kn = 0.05;
    double alpha_ebh = 0.1;
    double offset_c = 1.0;
    bool no_early_stop = false;
    std::size_t runs = 50;
    std::uint64_t seed = 1;
    bool classic = false;
    unsigned workers = 1;
    std::string family = "gaussian";
    std::size_t cv_folds = 10;
    std::size_t cv_grid = 100;

    void attach(CLI::App* app)
    {
        app->add_option("--alpha-kn", alpha_kn, "Knockoff threshold level")->capture_default_str();
        app->add_option("--alpha-ebh", alpha_ebh, "e-BH target FDR")->capture_default_str();
        app->add_option("--offset", offset_c, "Threshold offset c (>= 1)")->capture_default_str();
        app->add_flag("--no-early-stop", no_early_stop, "Disable the early-stop threshold rule");
        app->add_option("-M,--runs", runs, "Knockoff copies M")->capture_default_str();
        app->add_option("--seed", seed, "Master seed")->capture_default_str();
        app->add_flag("--classic", classic,
                      "Classic knockoffs: M=1, alpha_kn=alpha_ebh, c=1, no early stop");
        app->add_option("--workers", workers, "Worker threads (results do not depend on it)")
            ->capture_default_str();
        app->add_option("--family", family, "gaussian or logistic")->capture_default_str();
        app->add_option("--cv-folds", cv_folds, "Cross-validation folds")->capture_default_str();
        app->add_option("--cv-grid", cv_grid, "Lambda grid size")->capture_default_str();
    }

    DerandomizeOptions options() const
    {
        DerandomizeOptions o;
        o.alpha_kn = classic ? alpha_ebh : alpha_kn;
        o.alpha_ebh = alpha_ebh;
        o.offset_c = classic ? 1.0 : offset_c;
        o.early_stop = classic ? false : !no_early_stop;
        o.runs = classic ? 1 : runs;
        o.master_seed = seed;
        o.workers = std::max(1U, workers);
        if (!(o.alpha_kn > 0.0 && o.alpha_kn <= 1.0)) {
            throw UsageError("--alpha-kn must lie in (0, 1]");
        }
        if (!(o.alpha_ebh > 0.0 && o.alpha_ebh <= 1.0)) {
            throw UsageError("--alpha-ebh must lie in (0, 1]");
        }
        if (!(o.offset_c >= 1.0)) {
            throw UsageError("--offset must be at least 1");
        }
        if (o.runs == 0) {
            throw UsageError("--runs must be positive");
        }
        return o;
    }

    CvOptions cv() const
    {
        CvOptions c;
        c.folds = cv_folds;
        c.grid = cv_grid;
        return c;
    }

    json echo() const
    {
        const DerandomizeOptions o = options();
        return {{"alpha_kn", o.alpha_kn},   {"alpha_ebh", o.alpha_ebh}, {"offset_c", o.offset_c},
                {"early_stop", o.early_stop}, {"M", o.runs},              {"classic", classic},
                {"family", family},         {"cv_folds", cv_folds},     {"cv_grid", cv_grid}};
    }
};

struct DataFlags {
    std::string path;
    std::string response;
    std::size_t min_occurrence = 3;

    void attach(CLI::App* app, bool required)
    {
        auto* d = app->add_option("--data", path, "CSV file with a header row");
        auto* r = app->add_option("--response", response, "Name of the response column");
        if (required) {
            d->required();
            r->required();
        }
        app->add_option("--min-occurrence", min_occurrence, "Drop binary columns with fewer ones")
            ->capture_default_str();
    }

    json echo() const
    {
        return {{"data", path}, {"response", response}, {"min_occurrence", min_occurrence}};
    }
};

void check_response(const Vector& y, Family family)
{
    if (family == Family::logistic) {
        for (Eigen::Index i = 0; i < y.size(); ++i) {
            if (y(i) != 0.0 && y(i) != 1.0) {
                throw UsageError("logistic family needs a 0/1 response");
            }
        }
    }
}

json selection_json(const DerandomizedResult& res, const std::vector<std::string>& names)
{
    std::vector<std::string> selected;
    std::vector<std::size_t> indices;
    for (const std::size_t j : res.selection.selected) {
        selected.push_back(names[j]);
        indices.push_back(j + 1);
    }
    return {{"selected", selected},
            {"selected_indices", indices},
            {"khat", res.selection.khat},
            {"ebh_level", res.selection.level},
            {"features", names},
            {"e_avg", to_std(res.e_avg.e)}};
}

// ---- simulate ---------------------------------------------------------------

struct SimulateArgs {
    std::string config;
    std::string preset;
    std::uint64_t seed = 0;
    CLI::Option* seed_opt = nullptr;
    unsigned workers = 1;
    std::string out;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err)
{
    ExperimentConfig cfg;
    std::vector<Artifact> artifacts;
    return run_phases(
        err, "simulate",
        [&] {
            if (a.config.empty() == a.preset.empty()) {
                throw UsageError("give exactly one of --config and --preset");
            }
            cfg = a.config.empty() ? experiment_preset(a.preset) : load_experiment_config(a.config);
            if (a.seed_opt && a.seed_opt->count() > 0) {
                cfg.seed = a.seed;
            }
            validate(cfg);
        },
        [&] {
            const ExperimentResult result = run_experiment(cfg, std::max(1U, a.workers));
            std::ostringstream runs;
            write_runs_csv(runs, result);
            artifacts.push_back({"summary.json", dump(summary_json(result))});
            artifacts.push_back({"runs.csv", runs.str()});
            write_artifacts(a.out, artifacts);
            for (const auto& m : result.methods) {
                out << m.method << ": power " << m.power << " fdr " << m.fdr << '\n';
            }
        });
}

// ---- select -----------------------------------------------------------------

struct SelectArgs {
    DataFlags data;
    FilterFlags filter;
    std::string mode = "mx";
    std::string env_column;
    std::string mekf = "cst";
    std::size_t r = 1;
    std::string side_info;
    std::string out;
};

SideInfo load_side_info(const std::string& path, const std::vector<std::string>& names)
{
    const Table t = read_csv_file(path);
    const auto col = [&](const std::string& h) {
        const auto it = std::find(t.header.begin(), t.header.end(), h);
        if (it == t.header.end()) {
            throw UsageError("side-info file needs a '" + h + "' column");
        }
        return static_cast<std::size_t>(it - t.header.begin());
    };
    const std::size_t fcol = col("feature");
    const std::size_t ucol = col("u");
    std::vector<std::size_t> extra;
    for (std::size_t c = 0; c < t.header.size(); ++c) {
        if (c != fcol && c != ucol) {
            extra.push_back(c);
        }
    }
    std::map<std::string, const std::vector<std::string>*> by_name;
    for (const auto& row : t.rows) {
        if (!by_name.emplace(row[fcol], &row).second) {
            throw UsageError("side-info lists feature '" + row[fcol] + "' twice");
        }
    }
    const auto p = static_cast<Eigen::Index>(names.size());
    SideInfo side;
    side.u.resize(p);
    side.covariates.resize(p, static_cast<Eigen::Index>(extra.size() + 1));
    auto number = [&](const std::string& s, const std::string& what) {
        try {
            std::size_t used = 0;
            const double v = std::stod(s, &used);
            if (used != s.size()) {
                throw std::invalid_argument(s);
            }
            return v;
        } catch (const std::logic_error&) {
            throw UsageError("side-info value '" + s + "' for " + what + " is not a number");
        }
    };
    for (Eigen::Index j = 0; j < p; ++j) {
        const auto it = by_name.find(names[static_cast<std::size_t>(j)]);
        if (it == by_name.end()) {
            throw UsageError("side-info has no row for feature '" + names[static_cast<std::size_t>(j)] + "'");
        }
        const auto& row = *it->second;
        side.u(j) = number(row[ucol], names[static_cast<std::size_t>(j)]);
        side.covariates(j, 0) = side.u(j);
        for (std::size_t c = 0; c < extra.size(); ++c) {
            side.covariates(j, static_cast<Eigen::Index>(c + 1)) = number(row[extra[c]], names[static_cast<std::size_t>(j)]);
        }
    }
    return side;
}

int cmd_select(const SelectArgs& a, std::ostream& out, std::ostream& err)
{
    Dataset ds;
    DerandomizeOptions opt;
    Family family = Family::gaussian;
    std::optional<GaussianModel> model;
    std::optional<FixedXDesign> fixed;
    std::vector<Environment> envs;
    SideInfo side;
    return run_phases(
        err, "select",
        [&] {
            static const std::vector<std::string> modes{"mx", "fixed_x", "multienv", "weighted", "adaptive"};
            if (std::find(modes.begin(), modes.end(), a.mode) == modes.end()) {
                throw UsageError("unknown mode '" + a.mode + "'");
            }
            opt = a.filter.options();
            family = parse_family(a.filter.family);
            CleaningOptions clean;
            clean.response = a.data.response;
            clean.min_occurrence = a.data.min_occurrence;
            if (a.mode == "multienv") {
                if (a.env_column.empty()) {
                    throw UsageError("mode multienv needs --env-column");
                }
                clean.exclude.push_back(a.env_column);
            }
            ds = load_csv(a.data.path, clean);
            check_response(ds.y, family);
            if (a.mode == "mx" || a.mode == "weighted" || a.mode == "adaptive") {
                model = second_order_model(ds.X);
            }
            if (a.mode == "fixed_x") {
                fixed.emplace(ds.X);
            }
            if (a.mode == "weighted" || a.mode == "adaptive") {
                if (a.side_info.empty()) {
                    throw UsageError("mode " + a.mode + " needs --side-info");
                }
                side = load_side_info(a.side_info, ds.feature_names);
                side.kind = a.mode == "weighted" ? SideInfoKind::weights : SideInfoKind::covariates;
                if (a.mode == "weighted" && !(side.u.array() > 0.0).all()) {
                    throw UsageError("weighted mode needs positive weights u");
                }
            }
            if (a.mode == "multienv") {
                if (a.mekf != "cst" && a.mekf != "pcst") {
                    throw UsageError("--mekf must be cst or pcst");
                }
                std::map<double, std::vector<Eigen::Index>> groups;
                const auto& env = ds.extras.at(a.env_column);
                for (std::size_t i = 0; i < env.size(); ++i) {
                    groups[env[i]].push_back(static_cast<Eigen::Index>(i));
                }
                if (a.r < 1 || a.r > groups.size()) {
                    throw UsageError("--r must lie in [1, number of environments]");
                }
                for (const auto& [value, rows] : groups) {
                    Matrix xe = ds.X(rows, Eigen::all);
                    GaussianModel me = second_order_model(xe);
                    Environment e{std::move(xe), ds.y(rows), std::move(me)};
                    envs.push_back(std::move(e));
                }
            }
        },
        [&] {
            const Statistic statistic = make_lcd_statistic(family, a.filter.cv());
            DerandomizedResult res;
            if (a.mode == "mx") {
                res = derandomized_knockoffs(ds.X, ds.y, *model, statistic, opt);
            } else if (a.mode == "fixed_x") {
                res = derandomized_fixed_x(*fixed, ds.y, statistic, opt);
            } else if (a.mode == "multienv") {
                MekfOptions mo;
                mo.mode = a.mekf == "cst" ? MekfMode::cst : MekfMode::pcst;
                mo.r = a.r;
                mo.derandomize = opt;
                res = derandomized_mekf(envs, statistic, mo);
            } else {
                const auto stats = compute_run_statistics(opt.runs, opt.master_seed, opt.workers,
                                                          [&](std::size_t, const RngStream& run) {
                                                              RngStream k = env_stream(run, stream_purpose::knockoff, 0);
                                                              RngStream s = env_stream(run, stream_purpose::statistic, 0);
                                                              const Matrix xt = sample_knockoff_mx(*model, ds.X, k);
                                                              return statistic(ds.X, xt, ds.y, s);
                                                          });
                res = a.mode == "weighted" ? aggregate_weighted(stats, side, opt)
                                           : aggregate_adaptive(stats, side, default_ordering_rule(), opt);
            }
            json params = a.filter.echo();
            params.update(a.data.echo());
            params["mode"] = a.mode;
            if (a.mode == "multienv") {
                params["env_column"] = a.env_column;
                params["environments"] = envs.size();
                params["mekf"] = a.mekf;
                params["r"] = a.r;
            }
            if (a.mode == "weighted" || a.mode == "adaptive") {
                params["side_info"] = a.side_info;
            }
            json j = {{"command", "select"},
                      {"parameters", params},
                      {"seed", opt.master_seed},
                      {"n", ds.X.rows()},
                      {"p", ds.X.cols()},
                      {"cleaning_log", ds.log}};
            j.update(selection_json(res, ds.feature_names));
            write_artifacts(a.out, {{"selection.json", dump(j)}});
            out << res.selection.selected.size() << " selected:";
            for (const std::size_t s : res.selection.selected) {
                out << ' ' << ds.feature_names[s];
            }
            out << '\n';
        });
}

// ---- diagnose ---------------------------------------------------------------

struct DiagnoseArgs {
    DataFlags data;
    FilterFlags filter;
    std::string config;
    std::string preset;
    std::string mode;
    double cov_scale = 1.0;
    std::string out;
};

int cmd_diagnose(const DiagnoseArgs& a, std::ostream& out, std::ostream& err)
{
    Matrix X;
    Vector y;
    std::vector<std::string> names;
    std::optional<GaussianModel> truth;
    std::optional<GaussianModel> used;
    DerandomizeOptions opt;
    Family family = Family::gaussian;
    json source;
    return run_phases(
        err, "diagnose",
        [&] {
            if (a.mode != "robustness" && a.mode != "sharpness" && a.mode != "exchangeability") {
                throw UsageError("unknown mode '" + a.mode + "'");
            }
            const int sources = (a.config.empty() ? 0 : 1) + (a.preset.empty() ? 0 : 1) + (a.data.path.empty() ? 0 : 1);
            if (sources != 1) {
                throw UsageError("give exactly one of --config, --preset and --data");
            }
            if (!(a.cov_scale > 0.0)) {
                throw UsageError("--cov-scale must be positive");
            }
            opt = a.filter.options();
            family = parse_family(a.filter.family);
            if (a.data.path.empty()) {
                ExperimentConfig cfg = a.config.empty() ? experiment_preset(a.preset) : load_experiment_config(a.config);
                cfg.family = family;
                RngStream s = dataset_stream(cfg, 0);
                SimulatedData d = generate_dataset(cfg, s);
                X = std::move(d.X);
                y = std::move(d.y);
                truth = experiment_model(cfg);
                for (std::size_t j = 0; j < cfg.p; ++j) {
                    names.push_back("X" + std::to_string(j + 1));
                }
                source = {{"config", to_json(cfg)}, {"dataset", 0}};
            } else {
                if (a.data.response.empty()) {
                    throw UsageError("--data needs --response");
                }
                Dataset ds = load_csv(a.data.path, a.data.response, a.data.min_occurrence);
                X = std::move(ds.X);
                y = std::move(ds.y);
                names = ds.feature_names;
                truth = second_order_model(X);
                source = a.data.echo();
            }
            check_response(y, family);
            Matrix cov = truth->cov().matrix() * a.cov_scale;
            used = GaussianModel::equicorrelated(truth->mean(), std::move(cov));
        },
        [&] {
            json report = {{"command", "diagnose"}, {"mode", a.mode}, {"source", source},
                           {"parameters", a.filter.echo()}, {"seed", opt.master_seed}};
            if (a.mode == "robustness") {
                std::vector<Matrix> xt(opt.runs);
                for (std::size_t m = 0; m < opt.runs; ++m) {
                    xt[m] = run_knockoff_mx(*used, X, opt.master_seed, m);
                }
                const KlDiagnostic kl = empirical_kl(*truth, *used, X, xt);
                report["cov_scale"] = a.cov_scale;
                report["features"] = names;
                report["kl_max"] = to_std(kl.kl_max);
                report["kl_max_overall"] = kl.kl_max.size() ? kl.kl_max.maxCoeff() : 0.0;
                out << "max empirical KL " << report["kl_max_overall"].get<double>() << '\n';
            } else if (a.mode == "sharpness") {
                const DerandomizedResult res =
                    derandomized_knockoffs(X, y, *used, make_lcd_statistic(family, a.filter.cv()), opt);
                const SharpnessReport sh = sharpness_diagnostic(res.e_avg, res.selection);
                json entries = json::array();
                for (const auto& e : sh.entries) {
                    entries.push_back({{"feature", names[e.feature]}, {"e", e.e}, {"ratio", e.ratio}});
                }
                report["selected"] = sh.selected;
                report["bar"] = sh.bar;
                report["min_ratio"] = sh.min_ratio;
                report["max_ratio"] = sh.max_ratio;
                report["entries"] = entries;
                out << sh.selected << " selected, e/bar in [" << sh.min_ratio << ", " << sh.max_ratio << "]\n";
            } else {
                const Matrix xt = run_knockoff_mx(*used, X, opt.master_seed, 0);
                json features = json::array();
                std::vector<std::string> flagged;
                double worst = 0.0;
                for (std::size_t j = 0; j < names.size(); ++j) {
                    const ExchangeabilityReport r = exchangeability_diagnostic(X, xt, j);
                    features.push_back({{"feature", names[j]}, {"max_abs_z", r.max_abs_z}, {"flagged", r.flagged}});
                    if (r.flagged) {
                        flagged.push_back(names[j]);
                    }
                    worst = std::max(worst, r.max_abs_z);
                }
                report["cov_scale"] = a.cov_scale;
                report["flag_z"] = kFlagZ;
                report["features"] = features;
                report["flagged"] = flagged;
                report["max_abs_z"] = worst;
                out << flagged.size() << " of " << names.size() << " features flagged\n";
            }
            write_artifacts(a.out, {{"report.json", dump(report)}});
        });
}

// ---- ingest-check -----------------------------------------------------------

struct IngestArgs {
    DataFlags data;
    FilterFlags filter;
    std::size_t reruns = 0;
    std::string out;
};

int cmd_ingest(const IngestArgs& a, std::ostream& out, std::ostream& err)
{
    Dataset ds;
    RealDataOptions ro;
    return run_phases(
        err, "ingest-check",
        [&] {
            ds = load_csv(a.data.path, a.data.response, a.data.min_occurrence);
            const DerandomizeOptions opt = a.filter.options();
            ro.alpha_kn = opt.alpha_kn;
            ro.alpha_ebh = opt.alpha_ebh;
            ro.offset_c = opt.offset_c;
            ro.early_stop = opt.early_stop;
            ro.runs = opt.runs;
            ro.reruns = a.reruns;
            ro.master_seed = opt.master_seed;
            ro.workers = opt.workers;
            ro.family = parse_family(a.filter.family);
            ro.cv = a.filter.cv();
            check_response(ds.y, ro.family);
            if (a.reruns > 0 && a.out.empty()) {
                throw UsageError("--reruns needs --out");
            }
        },
        [&] {
            json report = {{"command", "ingest-check"}, {"parameters", a.data.echo()}, {"rows", ds.X.rows()},
                           {"features", ds.X.cols()}, {"feature_names", ds.feature_names},
                           {"cleaning_log", ds.log}};
            out << ds.X.rows() << " rows, " << ds.X.cols() << " features after cleaning\n";
            for (const auto& line : ds.log) {
                out << "  " << line << '\n';
            }
            std::vector<Artifact> artifacts;
            if (a.reruns > 0) {
                const RealDataSummary summary = real_data_pipeline(ds, ro);
                json runs = to_json(summary);
                json params = a.filter.echo();
                params["reruns"] = a.reruns;
                runs["parameters"] = params;
                runs["seed"] = ro.master_seed;
                std::ostringstream freq;
                write_frequencies_csv(freq, summary);
                artifacts.push_back({"runs.json", dump(runs)});
                artifacts.push_back({"frequencies.csv", freq.str()});
            }
            if (!a.out.empty()) {
                artifacts.insert(artifacts.begin(), {"ingest.json", dump(report)});
                write_artifacts(a.out, artifacts);
            }
        });
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Derandomized knockoffs with e-values", "dkn"};
    app.require_subcommand(1);

    SimulateArgs sim;
    auto* s = app.add_subcommand("simulate", "Run a simulation experiment from a JSON config");
    s->add_option("--config", sim.config, "Experiment config (JSON)");
    s->add_option("--preset", sim.preset, "Named preset instead of a config file");
    sim.seed_opt = s->add_option("--seed", sim.seed, "Override the config seed");
    s->add_option("--workers", sim.workers, "Worker threads (results do not depend on it)")->capture_default_str();
    s->add_option("--out", sim.out, "Output directory")->required();

    SelectArgs sel;
    auto* c = app.add_subcommand("select", "Derandomized knockoff selection on a CSV dataset");
    sel.data.attach(c, true);
    sel.filter.attach(c);
    c->add_option("--mode", sel.mode, "mx, fixed_x, multienv, weighted or adaptive")->capture_default_str();
    c->add_option("--env-column", sel.env_column, "Environment label column (multienv)");
    c->add_option("--mekf", sel.mekf, "cst or pcst (multienv)")->capture_default_str();
    c->add_option("--r", sel.r, "Environments required by pcst")->capture_default_str();
    c->add_option("--side-info", sel.side_info, "CSV with columns feature,u[,...] (weighted, adaptive)");
    c->add_option("--out", sel.out, "Output directory")->required();

    DiagnoseArgs diag;
    auto* d = app.add_subcommand("diagnose", "Robustness, sharpness or exchangeability report");
    diag.data.attach(d, false);
    diag.filter.runs = 20;
    diag.filter.attach(d);
    d->add_option("--config", diag.config, "Simulate dataset 0 of this experiment config");
    d->add_option("--preset", diag.preset, "Simulate dataset 0 of this preset");
    d->add_option("--mode", diag.mode, "robustness, sharpness or exchangeability")->required();
    d->add_option("--cov-scale", diag.cov_scale, "Knockoffs drawn with the covariance scaled by this factor")
        ->capture_default_str();
    d->add_option("--out", diag.out, "Output directory")->required();

    IngestArgs ing;
    auto* g = app.add_subcommand("ingest-check", "Load and clean a CSV; optionally run the real-data pipeline");
    ing.data.attach(g, true);
    ing.filter.runs = 100;
    ing.filter.attach(g);
    g->add_option("--reruns", ing.reruns, "Reruns of both methods (0 = cleaning report only)")
        ->capture_default_str();
    g->add_option("--out", ing.out, "Output directory");

    std::vector<const char*> argv{"dkn"};
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (s->parsed()) {
        return cmd_simulate(sim, out, err);
    }
    if (c->parsed()) {
        return cmd_select(sel, out, err);
    }
    if (d->parsed()) {
        return cmd_diagnose(diag, out, err);
    }
    return cmd_ingest(ing, out, err);
}

} // namespace dkn
