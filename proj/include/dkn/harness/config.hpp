#pragma once

#include "dkn/stats/lasso.hpp"

#include "json.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace dkn {

/// Simulation settings. Defaults are the desk-scale Gaussian linear design.
struct ExperimentConfig {
    std::string name = "linear_desk";
    std::string scale = "desk";
    std::size_t n = 200;
    std::size_t p = 50;
    Family family = Family::gaussian;
    double amplitude = 8.0;     // A
    std::size_t spacing = 4;    // z
    std::size_t nonnulls = 10;
    double rho = 0.5;           // AR(1) correlation
    double alpha_kn = 0.05;
    double alpha_ebh = 0.1;
    double offset_c = 1.0;
    bool early_stop = true;
    std::size_t runs = 10;      // M
    std::size_t datasets = 50;  // D
    std::size_t reruns = 5;     // K
    std::uint64_t seed = 20220101;
    std::vector<std::string> methods{"original", "derandomized"};
    std::size_t cv_folds = 10;
    std::size_t cv_grid = 100;
};

/// Throws ConfigInvalid naming the offending field.
void validate(const ExperimentConfig& cfg);

/// Named presets: linear_desk, linear_full, logistic_desk, logistic_full.
/// Throws ConfigInvalid for an unknown name.
ExperimentConfig experiment_preset(std::string_view name);
std::vector<std::string> experiment_preset_names();

/// Reads a config object. A "preset" key selects the starting point; every
/// other key overrides one field. Unknown keys and wrong types throw
/// ConfigInvalid. The result is validated.
ExperimentConfig parse_experiment_config(const nlohmann::json& j);

/// Parses JSON text; syntax errors throw ConfigInvalid with a line number.
ExperimentConfig parse_experiment_config_text(std::string_view text);

/// Reads and parses a config file. Throws FileUnreadable or ConfigInvalid.
ExperimentConfig load_experiment_config(const std::string& path);

nlohmann::json to_json(const ExperimentConfig& cfg);

} // namespace dkn
