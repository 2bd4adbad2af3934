#pragma once

#include "dkn/harness/config.hpp"
#include "dkn/knockoffs/gaussian_model.hpp"
#include "dkn/numerics/rng.hpp"

#include <cstddef>
#include <vector>

namespace dkn {

struct ExperimentTruth {
    std::vector<std::size_t> nonnulls;  // H1, ascending
    Vector beta;
};

struct SimulatedData {
    Matrix X;
    Vector y;
    ExperimentTruth truth;
};

/// β̄ ~ N(A, 1) per non-null, drawn from a stream that depends only on the
/// experiment seed, so every dataset of an experiment shares it.
Vector frozen_amplitudes(const ExperimentConfig& cfg);

/// β with non-null i at index i·(z+1)+z, value ±β̄_i/√n, signs alternating
/// starting with +.
ExperimentTruth experiment_truth(const ExperimentConfig& cfg);

/// N(0, Σ) with Σ_jk = ρ^|j−k| and the equicorrelated knockoff diagonal.
GaussianModel experiment_model(const ExperimentConfig& cfg);

/// Rows of X i.i.d. N(0, Σ); Y | X ~ N(Xβ, 1) or Bernoulli(σ(Xβ)) drawn by
/// inverse CDF. Normals for X are consumed row-major from `stream`, then the
/// noise / uniforms for Y.
SimulatedData generate_dataset(const ExperimentConfig& cfg, RngStream& stream);

/// Stream of dataset d of an experiment.
RngStream dataset_stream(const ExperimentConfig& cfg, std::size_t d) noexcept;

/// Master seed for rerun k on dataset d.
std::uint64_t rerun_seed(std::uint64_t experiment_seed, std::size_t d, std::size_t k) noexcept;

} // namespace dkn
