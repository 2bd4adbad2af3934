#include "dkn/error.hpp"
#include "dkn/harness/config.hpp"
#include "dkn/harness/data.hpp"
#include "dkn/harness/experiment.hpp"
#include "dkn/harness/metrics.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace dkn;

namespace {

ExperimentTruth truth_of(std::vector<std::size_t> nonnulls, std::size_t p)
{
    ExperimentTruth t;
    t.beta = Vector::Zero(static_cast<Eigen::Index>(p));
    for (const std::size_t j : nonnulls) {
        t.beta(static_cast<Eigen::Index>(j)) = 1.0;
    }
    t.nonnulls = std::move(nonnulls);
    return t;
}

ExperimentConfig tiny_config()
{
    ExperimentConfig c;
    c.name = "tiny";
    c.n = 80;
    c.p = 20;
    c.nonnulls = 4;
    c.spacing = 3;
    c.alpha_kn = 0.25;
    c.alpha_ebh = 0.2;
    c.runs = 3;
    c.datasets = 4;
    c.reruns = 2;
    c.cv_folds = 5;
    c.cv_grid = 20;
    c.seed = 17;
    return c;
}

} // namespace

TEST(ScoreSelection, Examples)
{
    const ExperimentTruth t = truth_of({0}, 10);
    const SelectionScore a = score_selection({0, 1}, t);
    EXPECT_EQ(a.power, 1.0);
    EXPECT_EQ(a.fdp, 0.5);
    const SelectionScore e = score_selection({}, t);
    EXPECT_EQ(e.power, 0.0);
    EXPECT_EQ(e.fdp, 0.0);
    const ExperimentTruth t3 = truth_of({2, 5, 7}, 10);
    const SelectionScore exact = score_selection({2, 5, 7}, t3);
    EXPECT_EQ(exact.power, 1.0);
    EXPECT_EQ(exact.fdp, 0.0);
}

TEST(SelectionVariability, IdenticalSetsGiveZero)
{
    const SelectionTable table(3, std::vector<Selection>(4, Selection{1, 4}));
    const Variability v = selection_variability(table, 10);
    EXPECT_EQ(v.marginal, 0.0);
    EXPECT_EQ(v.conditional, 0.0);
}

TEST(SelectionVariability, HandComputedTable)
{
    // Marginal: frequencies (1/2, 1/4, 1/2), mean size 5/4 → (11/16)/(35/48) = 33/35.
    // Conditional: spreads 1/4 and 0 over baselines 3/4 and 2/3 → 3/17.
    const SelectionTable table{{{0}, {0, 1}}, {{2}, {2}}};
    const Variability v = selection_variability(table, 3);
    EXPECT_NEAR(v.marginal, 33.0 / 35.0, 1e-15);
    EXPECT_NEAR(v.conditional, 3.0 / 17.0, 1e-15);
}

TEST(SelectionVariability, UniformRandomSetsNearOne)
{
    RngStream s(61, 0);
    const std::size_t p = 20;
    SelectionTable table(400, std::vector<Selection>(5));
    for (auto& row : table) {
        for (auto& sel : row) {
            std::vector<std::size_t> idx(p);
            for (std::size_t j = 0; j < p; ++j) {
                idx[j] = j;
            }
            for (std::size_t j = 0; j < 5; ++j) {
                std::swap(idx[j], idx[j + s.uniform_index(p - j)]);
            }
            sel.assign(idx.begin(), idx.begin() + 5);
            std::sort(sel.begin(), sel.end());
        }
    }
    EXPECT_NEAR(selection_variability(table, p).marginal, 1.0, 0.02);
}

TEST(SelectionVariability, SingleDatasetCollapses)
{
    const SelectionTable table{{{0, 1}, {1, 2}, {0, 2}}};
    const Variability v = selection_variability(table, 4);
    EXPECT_DOUBLE_EQ(v.marginal, v.conditional);
}

TEST(SelectionVariability, EmptySelectionsUseZeroConvention)
{
    const SelectionTable table(2, std::vector<Selection>(2));
    const Variability v = selection_variability(table, 5);
    EXPECT_EQ(v.marginal, 0.0);
    EXPECT_EQ(v.conditional, 0.0);
    EXPECT_THROW(selection_variability({}, 5), Error);
}

TEST(BaselineFrequency, Examples)
{
    const Vector f = baseline_frequency({{0, 1}, {0}, {0, 1}, {0, 1}}, 3);
    EXPECT_EQ(f(0), 1.0);
    EXPECT_EQ(f(1), 0.75);
    EXPECT_EQ(f(2), 0.0);
    EXPECT_THROW(baseline_frequency({}, 3), Error);
}

TEST(ExperimentTruth, DeskLayout)
{
    const ExperimentConfig c = experiment_preset("linear_desk");
    const ExperimentTruth t = experiment_truth(c);
    ASSERT_EQ(t.nonnulls.size(), 10u);
    const Vector bar = frozen_amplitudes(c);
    for (std::size_t i = 0; i < 10; ++i) {
        const std::size_t j = t.nonnulls[i];
        EXPECT_EQ(j, 5 * i + 4);
        const double expected = (i % 2 ? -1.0 : 1.0) * bar(static_cast<Eigen::Index>(i)) / std::sqrt(200.0);
        EXPECT_EQ(t.beta(static_cast<Eigen::Index>(j)), expected);
    }
    EXPECT_EQ((t.beta.array() != 0.0).count(), 10);
}

TEST(ExperimentTruth, FullScaleLinearShape)
{
    const ExperimentConfig c = experiment_preset("linear_full");
    EXPECT_EQ(c.n, 1000u);
    EXPECT_EQ(c.p, 800u);
    EXPECT_EQ(c.spacing, 9u);
    EXPECT_EQ(c.nonnulls, 80u);
    EXPECT_EQ(c.rho, 0.5);
    const ExperimentTruth t = experiment_truth(c);
    EXPECT_EQ(t.nonnulls.back(), 799u);
}

TEST(ExperimentTruth, AmplitudesFrozenAcrossDatasets)
{
    const ExperimentConfig c = tiny_config();
    RngStream a = dataset_stream(c, 0);
    RngStream b = dataset_stream(c, 3);
    const SimulatedData da = generate_dataset(c, a);
    const SimulatedData db = generate_dataset(c, b);
    EXPECT_EQ(da.truth.beta, db.truth.beta);
    EXPECT_NE(da.X, db.X);
}

TEST(GenerateDataset, Deterministic)
{
    const ExperimentConfig c = tiny_config();
    RngStream a = dataset_stream(c, 1);
    RngStream b = dataset_stream(c, 1);
    const SimulatedData da = generate_dataset(c, a);
    const SimulatedData db = generate_dataset(c, b);
    EXPECT_EQ(da.X, db.X);
    EXPECT_EQ(da.y, db.y);
}

TEST(GenerateDataset, CovarianceAndLogisticResponse)
{
    ExperimentConfig c = tiny_config();
    c.n = 20000;
    c.p = 4;
    c.nonnulls = 1;
    c.family = Family::logistic;
    RngStream s = dataset_stream(c, 0);
    const SimulatedData d = generate_dataset(c, s);
    const Matrix cov = d.X.transpose() * d.X / static_cast<double>(c.n);
    EXPECT_NEAR(cov(0, 1), 0.5, 0.03);
    EXPECT_NEAR(cov(0, 2), 0.25, 0.03);
    EXPECT_TRUE(((d.y.array() == 0.0) || (d.y.array() == 1.0)).all());
}

TEST(GenerateDataset, ZeroAmplitudeStillValid)
{
    ExperimentConfig c = tiny_config();
    c.amplitude = 0.0;
    const Vector bar = frozen_amplitudes(c);
    EXPECT_LT(bar.cwiseAbs().maxCoeff(), 5.0);
}

TEST(Config, PresetsValidate)
{
    for (const auto& name : experiment_preset_names()) {
        EXPECT_NO_THROW(validate(experiment_preset(name))) << name;
        EXPECT_EQ(experiment_preset(name).name, name);
    }
    EXPECT_THROW(experiment_preset("nope"), Error);
}

TEST(Config, UnknownKeyIsError)
{
    try {
        parse_experiment_config_text(R"({"n": 100, "colour": 3})");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::ConfigInvalid);
        EXPECT_NE(std::string(e.what()).find("colour"), std::string::npos);
    }
}

TEST(Config, MalformedJsonReportsLine)
{
    try {
        parse_experiment_config_text("{\n  \"n\": 100,\n  \"p\": ,\n}");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::ConfigInvalid);
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
    }
}

TEST(Config, InvalidValuesRejected)
{
    EXPECT_THROW(parse_experiment_config_text(R"({"p": 10, "nonnulls": 5, "spacing": 4})"), Error);
    EXPECT_THROW(parse_experiment_config_text(R"({"alpha_ebh": 1.5})"), Error);
    EXPECT_THROW(parse_experiment_config_text(R"({"n": -3})"), Error);
    EXPECT_THROW(parse_experiment_config_text(R"({"family": "poisson"})"), Error);
    EXPECT_THROW(parse_experiment_config_text(R"({"methods": ["bogus"]})"), Error);
    EXPECT_THROW(load_experiment_config("/nonexistent/config.json"), Error);
}

TEST(Config, PresetWithOverridesAndRoundTrip)
{
    const ExperimentConfig c = parse_experiment_config_text(R"({"preset": "logistic_desk", "M": 3, "seed": 9})");
    EXPECT_EQ(c.family, Family::logistic);
    EXPECT_EQ(c.runs, 3u);
    EXPECT_EQ(c.seed, 9u);
    const ExperimentConfig back = parse_experiment_config(to_json(c));
    EXPECT_EQ(to_json(back), to_json(c));
}

TEST(RunExperiment, DeterministicAndWorkerInvariant)
{
    const ExperimentConfig c = tiny_config();
    const ExperimentResult a = run_experiment(c, 1);
    const ExperimentResult b = run_experiment(c, 3);
    EXPECT_EQ(summary_json(a), summary_json(b));
    ASSERT_EQ(a.runs.size(), b.runs.size());
    for (std::size_t i = 0; i < a.runs.size(); ++i) {
        EXPECT_EQ(a.runs[i].selected, b.runs[i].selected);
    }
    std::ostringstream ca;
    std::ostringstream cb;
    write_runs_csv(ca, a);
    write_runs_csv(cb, b);
    EXPECT_EQ(ca.str(), cb.str());
    EXPECT_EQ(a.runs.size(), c.datasets * c.reruns * c.methods.size());
}

TEST(RunExperiment, RaisingEbhLevelNeverShrinks)
{
    const ExperimentConfig c = tiny_config();
    std::vector<RerunStatistics> kept;
    run_experiment(c, 1, [&](const RerunStatistics& r) { kept.push_back(r); });
    ASSERT_EQ(kept.size(), c.datasets * c.reruns);
    for (const auto& r : kept) {
        std::size_t previous = 0;
        for (const double level : {0.05, 0.1, 0.2, 0.4}) {
            ExperimentConfig cc = c;
            cc.alpha_ebh = level;
            const Selection s = apply_method("derandomized", r.statistics, cc);
            EXPECT_GE(s.size(), previous);
            previous = s.size();
        }
    }
}

TEST(RunExperiment, SeedsAgreeWithinBands)
{
    ExperimentConfig c = tiny_config();
    c.datasets = 12;
    const ExperimentResult a = run_experiment(c, 1);
    c.seed = 18;
    const ExperimentResult b = run_experiment(c, 1);
    for (std::size_t m = 0; m < a.methods.size(); ++m) {
        const auto& x = a.methods[m];
        const auto& y = b.methods[m];
        // The frozen amplitudes change with the seed too, so allow a generous 4 SE.
        EXPECT_LE(std::abs(x.fdr - y.fdr), 4.0 * std::hypot(x.fdr_se, y.fdr_se) + 1e-12) << x.method;
        EXPECT_LE(std::abs(x.power - y.power), 4.0 * std::hypot(x.power_se, y.power_se) + 0.05) << x.method;
    }
}

TEST(RunExperiment, MoreRunsLowerConditionalVariability)
{
    // Strong-signal desk design; at the default design both methods select almost nothing.
    ExperimentConfig c = experiment_preset("linear_desk");
    c.nonnulls = 20;
    c.spacing = 1;
    c.datasets = 3;
    c.reruns = 4;
    c.methods = {"derandomized"};
    SelectionTable single(c.datasets, std::vector<Selection>(c.reruns));
    SelectionTable averaged = single;
    run_experiment(c, 1, [&](const RerunStatistics& r) {
        single[r.dataset][r.rerun] = apply_method("derandomized", {r.statistics.front()}, c);
        averaged[r.dataset][r.rerun] = apply_method("derandomized", r.statistics, c);
    });
    const double v1 = selection_variability(single, c.p).conditional;
    const double v10 = selection_variability(averaged, c.p).conditional;
    EXPECT_LT(v10, v1);
}
