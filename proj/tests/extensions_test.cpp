#include "dkn/error.hpp"
#include "dkn/extensions/fixed_x_derandomized.hpp"
#include "dkn/extensions/multienv.hpp"
#include "dkn/extensions/robustness.hpp"
#include "dkn/extensions/side_info.hpp"
#include "dkn/filter/derandomized.hpp"
#include "dkn/numerics/binomial.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <set>

using namespace dkn;

namespace {

Matrix normal_matrix(Eigen::Index n, Eigen::Index p, RngStream& s)
{
    Matrix x(n, p);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < p; ++j) {
            x(i, j) = s.normal();
        }
    }
    return x;
}

// Swap-antisymmetric and a function of the Gram data, so valid for both constructions.
ImportanceVector marginal_statistic(const Matrix& x, const Matrix& xt, const Vector& y, RngStream&)
{
    ImportanceVector out;
    out.w = (x.transpose() * y).cwiseAbs() - (xt.transpose() * y).cwiseAbs();
    return out;
}

Vector random_w(RngStream& s, Eigen::Index p)
{
    Vector w(p);
    for (Eigen::Index j = 0; j < p; ++j) {
        w(j) = s.uniform() < 0.1 ? 0.0 : s.normal() + (j < p / 3 ? 2.0 : 0.0);
    }
    return w;
}

double normal_log_pdf(double x, double mean, double var)
{
    return -0.5 * std::log(2.0 * std::numbers::pi * var) - (x - mean) * (x - mean) / (2.0 * var);
}

ThresholdResult threshold_at(double t)
{
    ThresholdResult thr;
    thr.t = t;
    thr.offset_c = 1.0;
    return thr;
}

} // namespace

TEST(EmpiricalKl, OneDimensionalHandValue)
{
    const GaussianModel p(Vector::Zero(1), Matrix::Identity(1, 1), Vector::Ones(1));
    const GaussianModel q(Vector::Zero(1), 4.0 * Matrix::Identity(1, 1), Vector::Ones(1));
    const Matrix x = Matrix::Zero(1, 1);
    const Matrix xt = Matrix::Constant(1, 1, 2.0);
    const KlDiagnostic d = empirical_kl(p, q, x, {xt});
    const double oracle = normal_log_pdf(0, 0, 1) - normal_log_pdf(0, 0, 4) + normal_log_pdf(2, 0, 4)
                          - normal_log_pdf(2, 0, 1);
    EXPECT_NEAR(oracle, 1.5, 1e-14);
    EXPECT_NEAR(d.kl[0](0), oracle, 1e-12);
    EXPECT_NEAR(d.kl_max(0), oracle, 1e-12);
}

TEST(EmpiricalKl, MatchesSchurComplementOracle)
{
    RngStream s(41, 0);
    const Matrix a = normal_matrix(3, 3, s);
    const Matrix cov_p = a * a.transpose() + Matrix::Identity(3, 3);
    const Matrix cov_q = 1.3 * cov_p + 0.1 * Matrix::Identity(3, 3);
    const Vector mu = (Vector(3) << 0.5, -1, 0).finished();
    const GaussianModel mp = GaussianModel::equicorrelated(mu, cov_p);
    const GaussianModel mq = GaussianModel::equicorrelated(mu, cov_q);
    const Matrix x = normal_matrix(5, 3, s);
    const Matrix xt = normal_matrix(5, 3, s);
    const KlDiagnostic d = empirical_kl(mp, mq, x, {xt});

    auto conditional = [&](const Matrix& cov, Eigen::Index j, const Eigen::RowVectorXd& row) {
        std::vector<Eigen::Index> rest;
        for (Eigen::Index k = 0; k < 3; ++k) {
            if (k != j) {
                rest.push_back(k);
            }
        }
        Matrix srr(2, 2);
        Vector sjr(2);
        Vector dr(2);
        for (int u = 0; u < 2; ++u) {
            sjr(u) = cov(j, rest[u]);
            dr(u) = row(rest[u]) - mu(rest[u]);
            for (int v = 0; v < 2; ++v) {
                srr(u, v) = cov(rest[u], rest[v]);
            }
        }
        const Vector coef = srr.inverse() * sjr;
        return std::pair{mu(j) + coef.dot(dr), cov(j, j) - coef.dot(sjr)};
    };
    for (Eigen::Index j = 0; j < 3; ++j) {
        double oracle = 0.0;
        for (Eigen::Index i = 0; i < 5; ++i) {
            const auto [mp_x, vp] = conditional(cov_p, j, x.row(i));
            const auto [mq_x, vq] = conditional(cov_q, j, x.row(i));
            oracle += normal_log_pdf(x(i, j), mp_x, vp) - normal_log_pdf(x(i, j), mq_x, vq);
            oracle += normal_log_pdf(xt(i, j), mq_x, vq) - normal_log_pdf(xt(i, j), mp_x, vp);
        }
        EXPECT_NEAR(d.kl[0](j), oracle, 1e-9) << j;
    }
}

TEST(EmpiricalKl, ZeroWhenModelsAgreeAndMaxMonotone)
{
    RngStream s(42, 0);
    const Matrix cov = ar1_covariance(6, 0.5);
    const GaussianModel m = GaussianModel::equicorrelated(Vector::Zero(6), cov);
    const GaussianModel q = GaussianModel::equicorrelated(Vector::Zero(6), 1.05 * cov);
    const Matrix x = normal_matrix(40, 6, s) * cholesky(cov).transpose();
    std::vector<Matrix> runs;
    for (int m_ = 0; m_ < 5; ++m_) {
        runs.push_back(sample_knockoff_mx(q, x, s));
    }
    const KlDiagnostic same = empirical_kl(m, m, x, runs);
    for (const Vector& k : same.kl) {
        EXPECT_TRUE(k.isZero(0.0));
    }
    Vector previous = Vector::Constant(6, -1e300);
    for (std::size_t upto = 1; upto <= runs.size(); ++upto) {
        const KlDiagnostic d = empirical_kl(m, q, x, {runs.begin(), runs.begin() + static_cast<long>(upto)});
        EXPECT_TRUE((d.kl_max.array() >= previous.array()).all());
        previous = d.kl_max;
    }
}

TEST(MultiEnvCst, SpecExamples)
{
    MultiEnvStatistics s;
    s.w.resize(2, 3);
    s.w << 2, 2, 0, -3, 3, 5;
    const Vector w = multienv_statistic_cst(s).w;
    EXPECT_EQ(w(0), -6.0);
    EXPECT_EQ(w(1), 6.0);
    EXPECT_EQ(w(2), 0.0);
}

TEST(MultiEnvCst, UniqueNegativeFlipsSign)
{
    RngStream st(43, 0);
    for (int trial = 0; trial < 100; ++trial) {
        MultiEnvStatistics s;
        s.w = Matrix(3, 1);
        for (Eigen::Index e = 0; e < 3; ++e) {
            s.w(e, 0) = 0.1 + st.uniform();
        }
        const double before = multienv_statistic_cst(s).w(0);
        s.w(static_cast<Eigen::Index>(trial % 3), 0) *= -1.0;
        EXPECT_EQ(multienv_statistic_cst(s).w(0), -before);
    }
}

TEST(MultiEnvCst, NullSignsSymmetric)
{
    RngStream st(44, 0);
    const int columns = 4000;
    MultiEnvStatistics s;
    s.w = Matrix(2, columns);
    for (Eigen::Index j = 0; j < columns; ++j) {
        for (Eigen::Index e = 0; e < 2; ++e) {
            s.w(e, j) = (st.uniform() < 0.5 ? -1.0 : 1.0) * (0.1 + st.uniform());
        }
    }
    const Vector w = multienv_statistic_cst(s).w;
    // Under symmetric signs the collapsed sign is positive only when all agree: P = 1/4.
    const auto positive = static_cast<double>((w.array() > 0.0).count());
    EXPECT_NEAR(positive / columns, 0.25, 4.0 * std::sqrt(0.25 * 0.75 / columns));
}

TEST(MultiEnvPcst, TwoEnvOneRequired)
{
    MultiEnvStatistics s;
    s.w.resize(2, 1);
    s.w << 2, -3;
    RngStream a(45, 0);
    RngStream copy = a;
    const double u = copy.uniform();
    const double pj = 0.25 + 0.5 * u;
    EXPECT_DOUBLE_EQ(binom_cdf_pmf(0, 2, 0.5).cdf, 0.25);
    EXPECT_DOUBLE_EQ(binom_cdf_pmf(1, 2, 0.5).pmf, 0.5);
    const double w = multienv_statistic_pcst(s, 1, a).w(0);
    EXPECT_EQ(std::abs(w), 2.0);
    EXPECT_EQ(w > 0.0, pj < 0.5);
}

TEST(MultiEnvPcst, FullRankUsesEveryMagnitude)
{
    MultiEnvStatistics s;
    s.w.resize(3, 2);
    s.w << 2, -1, 3, 4, 5, 0.5;
    RngStream a(46, 0);
    const Vector w = multienv_statistic_pcst(s, 3, a).w;
    EXPECT_DOUBLE_EQ(std::abs(w(0)), 30.0);
    EXPECT_DOUBLE_EQ(std::abs(w(1)), 2.0);
}

TEST(MultiEnvPcst, AllPositiveColumnAndDeterminism)
{
    MultiEnvStatistics s;
    s.w = Matrix::Constant(3, 200, 1.0);
    RngStream a(47, 0);
    RngStream b(47, 0);
    const Vector wa = multienv_statistic_pcst(s, 2, a).w;
    const Vector wb = multienv_statistic_pcst(s, 2, b).w;
    EXPECT_EQ(wa, wb);
    // p_j = U·ψ(0, 2, ½) = U/4 < ½ always.
    EXPECT_TRUE((wa.array() > 0.0).all());
    RngStream c(47, 0);
    EXPECT_THROW(multienv_statistic_pcst(s, 0, c), Error);
    EXPECT_THROW(multienv_statistic_pcst(s, 4, c), Error);
}

TEST(WeightedEvalues, SpecExamples)
{
    const Vector w = (Vector(2) << 3, -1).finished();
    SideInfo side;
    side.u = (Vector(2) << 2, 1).finished();
    const Vector e = weighted_evalues(w, threshold_at(3.0), side, 2).e;
    EXPECT_EQ(e, (Vector(2) << 2, 0).finished());
}

TEST(WeightedEvalues, UnitWeightsMatchKnockoffEvalues)
{
    RngStream s(48, 0);
    for (int trial = 0; trial < 2000; ++trial) {
        const Vector w = random_w(s, 30);
        const ThresholdResult thr = knockoff_threshold(w, 0.2, 1.0, true);
        SideInfo side;
        side.u = Vector::Ones(30);
        ASSERT_EQ(weighted_evalues(w, thr, side, 30).e, knockoff_evalues(w, thr, 30).e) << trial;
    }
}

TEST(WeightedEvalues, ScaleInvariant)
{
    RngStream s(49, 0);
    for (int trial = 0; trial < 200; ++trial) {
        const Vector w = random_w(s, 25);
        const ThresholdResult thr = knockoff_threshold(w, 0.3, 1.0, true);
        SideInfo side;
        side.u = Vector::NullaryExpr(25, [&](Eigen::Index) { return 0.1 + s.uniform(); });
        const Vector a = weighted_evalues(w, thr, side, 25).e;
        side.u *= 2.0;
        EXPECT_EQ(weighted_evalues(w, thr, side, 25).e, a);
    }
}

TEST(WeightedEvalues, NonPositiveWeight)
{
    SideInfo side;
    side.u = (Vector(2) << 1, 0).finished();
    try {
        weighted_evalues(Vector::Ones(2), threshold_at(1.0), side, 2);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::NonPositiveWeight);
    }
}

TEST(AdaptiveEvalues, AllNegativeScreensEverything)
{
    const Vector w = -Vector::LinSpaced(6, 1, 6);
    const AdaptiveResult r = adaptive_knockoff_evalues(w, {}, default_ordering_rule(), 0.2, 6);
    EXPECT_EQ(r.stop, 6u);
    EXPECT_TRUE(r.e.e.isZero(0.0));
    EXPECT_EQ(r.order.size(), 6u);
}

TEST(AdaptiveEvalues, StopsImmediatelyWhenRatioAlreadySmall)
{
    Vector w = Vector::LinSpaced(20, 1, 20);
    w(19) = -0.5;
    const AdaptiveResult r = adaptive_knockoff_evalues(w, {}, default_ordering_rule(), 0.2, 20);
    EXPECT_EQ(r.stop, 0u);
    for (Eigen::Index j = 0; j < 20; ++j) {
        EXPECT_EQ(r.e.e(j), w(j) > 0.0 ? 10.0 : 0.0);
    }
}

TEST(AdaptiveEvalues, DefaultRuleScreensLowPriorityFirst)
{
    const Eigen::Index p = 8;
    SideInfo side;
    side.u = Vector::NullaryExpr(p, [](Eigen::Index j) { return std::exp(-static_cast<double>(j + 1)); });
    const Vector w = (Vector(p) << 5, 4, -1, 1, -1, 1, -1, -1).finished();
    const AdaptiveResult r = adaptive_knockoff_evalues(w, side, default_ordering_rule(), 0.5, p);
    ASSERT_FALSE(r.order.empty());
    for (std::size_t k = 0; k < r.order.size(); ++k) {
        EXPECT_EQ(r.order[k], static_cast<std::size_t>(p - 1) - k);
    }
    EXPECT_GT(r.e.e(0), 0.0);
}

TEST(AdaptiveEvalues, RuleSeesNoUnscreenedSigns)
{
    RngStream s(50, 0);
    const Vector w = random_w(s, 15);
    const OrderingRule base = default_ordering_rule();
    const OrderingRule checking = [&](const MaskedState& st) {
        for (std::size_t j = 0; j < st.screened.size(); ++j) {
            if (!st.screened[j]) {
                EXPECT_EQ(st.revealed_sign[j], 0);
            }
        }
        return base(st);
    };
    adaptive_knockoff_evalues(w, {}, checking, 0.05, 15);
}

TEST(AdaptiveEvalues, InvalidOrdering)
{
    const OrderingRule stuck = [](const MaskedState&) { return std::size_t{0}; };
    try {
        adaptive_knockoff_evalues(-Vector::Ones(4), {}, stuck, 0.1, 4);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::InvalidOrdering);
    }
}

TEST(AdaptiveEvalues, NullBudget)
{
    RngStream s(51, 0);
    const Eigen::Index p = 20;
    SideInfo side;
    side.u = Vector::NullaryExpr(p, [](Eigen::Index j) { return std::exp(-static_cast<double>(j + 1)); });
    const int reps = 20000;
    double sum = 0.0;
    double sum2 = 0.0;
    for (int r = 0; r < reps; ++r) {
        Vector w(p);
        for (Eigen::Index j = 0; j < p; ++j) {
            w(j) = (s.uniform() < 0.5 ? -1.0 : 1.0) * std::abs(s.normal());
        }
        const double total = adaptive_knockoff_evalues(w, side, default_ordering_rule(), 0.2, p).e.e.sum();
        sum += total;
        sum2 += total * total;
    }
    const double mean = sum / reps;
    const double se = std::sqrt((sum2 / reps - mean * mean) / reps);
    EXPECT_LE(mean, static_cast<double>(p) + 3.0 * se);
}

TEST(DerandomizedFixedX, EveryRunSatisfiesGramIdentities)
{
    RngStream s(52, 0);
    const Matrix x = normal_matrix(60, 10, s);
    const FixedXDesign design(x);
    const Matrix g = x.transpose() * x;
    for (std::size_t m = 0; m < 10; ++m) {
        const Matrix xt = run_knockoff_fixed_x(design, 5, m);
        EXPECT_LE((xt.transpose() * xt - g).cwiseAbs().maxCoeff(), 1e-8);
        const Matrix cross = g - Matrix(design.s().asDiagonal());
        EXPECT_LE((x.transpose() * xt - cross).cwiseAbs().maxCoeff(), 1e-8);
    }
}

TEST(DerandomizedFixedX, SingleRunReduction)
{
    RngStream s(53, 0);
    const Matrix x = normal_matrix(50, 10, s);
    Vector y = 3.0 * x.leftCols(3).rowwise().sum();
    y += Vector::NullaryExpr(50, [&](Eigen::Index) { return s.normal(); });
    const FixedXDesign design(x);
    DerandomizeOptions o;
    o.runs = 1;
    o.alpha_kn = 0.3;
    o.alpha_ebh = 0.3;
    o.early_stop = false;
    o.master_seed = 11;
    const DerandomizedResult r = derandomized_fixed_x(design, y, marginal_statistic, o);
    RngStream unused(0, 0);
    const Vector w = marginal_statistic(x, run_knockoff_fixed_x(design, 11, 0), y, unused).w;
    EXPECT_EQ(r.selection.selected, knockoff_filter(w, 0.3).selected);
}

TEST(DerandomizedFixedX, FdrControlledInSimulation)
{
    const Eigen::Index n = 300;
    const Eigen::Index p = 50;
    const int reps = 200;
    double fdp_sum = 0.0;
    double fdp_sq = 0.0;
    for (int rep = 0; rep < reps; ++rep) {
        RngStream s(54, static_cast<std::uint64_t>(rep));
        const Matrix x = normal_matrix(n, p, s);
        Vector y = Vector::NullaryExpr(n, [&](Eigen::Index) { return s.normal(); });
        for (Eigen::Index j = 0; j < 10; ++j) {
            y += 0.5 * x.col(j * 5);
        }
        const FixedXDesign design(x);
        DerandomizeOptions o;
        o.runs = 10;
        o.alpha_kn = 0.1;
        o.alpha_ebh = 0.2;
        o.master_seed = static_cast<std::uint64_t>(rep);
        const auto sel = derandomized_fixed_x(design, y, marginal_statistic, o).selection.selected;
        std::size_t false_pos = 0;
        for (const std::size_t j : sel) {
            false_pos += j % 5 != 0 || j >= 50;
        }
        const double fdp = sel.empty() ? 0.0 : static_cast<double>(false_pos) / static_cast<double>(sel.size());
        fdp_sum += fdp;
        fdp_sq += fdp * fdp;
    }
    const double fdr = fdp_sum / reps;
    const double se = std::sqrt((fdp_sq / reps - fdr * fdr) / reps);
    EXPECT_LE(fdr, 0.2 + 3.0 * se);
}

TEST(Mekf, SingleEnvironmentCstMatchesDerandomized)
{
    RngStream s(55, 0);
    const Matrix x = normal_matrix(80, 12, s);
    Vector y = 2.0 * x.leftCols(4).rowwise().sum();
    y += Vector::NullaryExpr(80, [&](Eigen::Index) { return s.normal(); });
    const GaussianModel model = GaussianModel::equicorrelated(Vector::Zero(12), Matrix::Identity(12, 12));
    MekfOptions o;
    o.derandomize.runs = 15;
    o.derandomize.alpha_kn = 0.3;
    o.derandomize.alpha_ebh = 0.3;
    o.derandomize.master_seed = 8;
    const DerandomizedResult a = derandomized_mekf({{x, y, model}}, marginal_statistic, o);
    const DerandomizedResult b = derandomized_knockoffs(x, y, model, marginal_statistic, o.derandomize);
    EXPECT_EQ(a.e_avg.e, b.e_avg.e);
    EXPECT_EQ(a.selection.selected, b.selection.selected);
}

TEST(Mekf, EnvironmentDimensionMismatch)
{
    const GaussianModel m3 = GaussianModel::equicorrelated(Vector::Zero(3), Matrix::Identity(3, 3));
    const GaussianModel m4 = GaussianModel::equicorrelated(Vector::Zero(4), Matrix::Identity(4, 4));
    const std::vector<Environment> envs{{Matrix::Zero(5, 3), Vector::Zero(5), m3},
                                        {Matrix::Zero(5, 4), Vector::Zero(5), m4}};
    try {
        derandomized_mekf(envs, marginal_statistic, {});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::EnvDimensionMismatch);
    }
}

TEST(Mekf, TwoEnvironmentFdrAndNonSharedSignals)
{
    // Shared signals on 0..24, environment 2 adds 25..29. Nulls are everything outside 0..24.
    const Eigen::Index p = 50;
    const Eigen::Index n = 200;
    const GaussianModel model = GaussianModel::equicorrelated(Vector::Zero(p), Matrix::Identity(p, p));
    const int reps = 100;
    double fdp_sum = 0.0;
    double fdp_sq = 0.0;
    double extra_hits = 0.0;
    double shared_hits = 0.0;
    for (int rep = 0; rep < reps; ++rep) {
        RngStream s(56, static_cast<std::uint64_t>(rep));
        std::vector<Environment> envs;
        for (int e = 0; e < 2; ++e) {
            const Matrix x = normal_matrix(n, p, s);
            Vector y = Vector::NullaryExpr(n, [&](Eigen::Index) { return s.normal(); });
            y += 0.5 * x.leftCols(25).rowwise().sum();
            if (e == 1) {
                y += 0.5 * x.middleCols(25, 5).rowwise().sum();
            }
            envs.push_back({x, y, model});
        }
        MekfOptions o;
        o.derandomize.runs = 5;
        o.derandomize.alpha_kn = 0.1;
        o.derandomize.alpha_ebh = 0.2;
        o.derandomize.master_seed = static_cast<std::uint64_t>(rep);
        const auto sel = derandomized_mekf(envs, marginal_statistic, o).selection.selected;
        std::size_t false_pos = 0;
        for (const std::size_t j : sel) {
            false_pos += j >= 25;
            extra_hits += j >= 25 && j < 30;
            shared_hits += j < 25;
        }
        const double fdp = sel.empty() ? 0.0 : static_cast<double>(false_pos) / static_cast<double>(sel.size());
        fdp_sum += fdp;
        fdp_sq += fdp * fdp;
    }
    const double fdr = fdp_sum / reps;
    const double se = std::sqrt((fdp_sq / reps - fdr * fdr) / reps);
    EXPECT_LE(fdr, 0.2 + 3.0 * se);
    EXPECT_LT(extra_hits / (5.0 * reps), 0.5 * shared_hits / (25.0 * reps));
}
