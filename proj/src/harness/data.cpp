#include "dkn/harness/data.hpp"

#include "dkn/error.hpp"

#include <cmath>

namespace dkn {

Vector frozen_amplitudes(const ExperimentConfig& cfg)
{
    RngStream s = RngStream(cfg.seed, 0).substream(stream_purpose::coefficients);
    Vector bar(static_cast<Eigen::Index>(cfg.nonnulls));
    for (Eigen::Index i = 0; i < bar.size(); ++i) {
        bar(i) = cfg.amplitude + s.normal();
    }
    return bar;
}

ExperimentTruth experiment_truth(const ExperimentConfig& cfg)
{
    validate(cfg);
    const Vector bar = frozen_amplitudes(cfg);
    ExperimentTruth t;
    t.beta = Vector::Zero(static_cast<Eigen::Index>(cfg.p));
    const double root_n = std::sqrt(static_cast<double>(cfg.n));
    for (std::size_t i = 0; i < cfg.nonnulls; ++i) {
        const std::size_t j = i * (cfg.spacing + 1) + cfg.spacing;
        const double sign = i % 2 == 0 ? 1.0 : -1.0;
        t.beta(static_cast<Eigen::Index>(j)) = sign * bar(static_cast<Eigen::Index>(i)) / root_n;
        t.nonnulls.push_back(j);
    }
    return t;
}

GaussianModel experiment_model(const ExperimentConfig& cfg)
{
    return GaussianModel::equicorrelated(Vector::Zero(static_cast<Eigen::Index>(cfg.p)),
                                         ar1_covariance(cfg.p, cfg.rho));
}

SimulatedData generate_dataset(const ExperimentConfig& cfg, RngStream& stream)
{
    SimulatedData out;
    out.truth = experiment_truth(cfg);
    const auto n = static_cast<Eigen::Index>(cfg.n);
    const auto p = static_cast<Eigen::Index>(cfg.p);
    const Matrix l = cholesky(ar1_covariance(cfg.p, cfg.rho));
    Matrix z(n, p);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < p; ++j) {
            z(i, j) = stream.normal();
        }
    }
    out.X = z * l.transpose();
    const Vector eta = out.X * out.truth.beta;
    out.y.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (cfg.family == Family::gaussian) {
            out.y(i) = eta(i) + stream.normal();
        } else {
            const double prob = 1.0 / (1.0 + std::exp(-eta(i)));
            out.y(i) = stream.uniform() <= prob ? 1.0 : 0.0;
        }
    }
    return out;
}

RngStream dataset_stream(const ExperimentConfig& cfg, std::size_t d) noexcept
{
    return RngStream(cfg.seed, 0).substream(stream_purpose::dataset).substream(static_cast<std::uint64_t>(d));
}

std::uint64_t rerun_seed(std::uint64_t experiment_seed, std::size_t d, std::size_t k) noexcept
{
    return mix64(mix64(experiment_seed ^ stream_purpose::method) ^ mix64((static_cast<std::uint64_t>(d) << 32) ^ k));
}

} // namespace dkn
