#pragma once

#include "dkn/harness/config.hpp"
#include "dkn/harness/data.hpp"
#include "dkn/harness/metrics.hpp"
#include "dkn/stats/importance.hpp"

#include "json.hpp"

#include <cstddef>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace dkn {

/// One (dataset, rerun, method) outcome.
struct RunRecord {
    std::size_t dataset = 0;
    std::size_t rerun = 0;
    std::string method;
    Selection selected;
    double power = 0.0;
    double fdp = 0.0;
};

struct MethodSummary {
    std::string method;
    double power = 0.0;
    double power_se = 0.0;  // standard error over datasets
    double fdr = 0.0;
    double fdr_se = 0.0;
    double mean_size = 0.0;
    Variability variability;
    Vector frequency;  // p̂_j
};

struct ExperimentResult {
    ExperimentConfig config;
    ExperimentTruth truth;
    std::vector<RunRecord> runs;  // ordered by (dataset, rerun, method)
    std::vector<MethodSummary> methods;
};

/// Per-(dataset, rerun) statistics W^{(1..M)}, as consumed by the methods.
struct RerunStatistics {
    std::size_t dataset = 0;
    std::size_t rerun = 0;
    std::vector<ImportanceVector> statistics;
};

/// D datasets × K reruns. Each rerun draws M knockoff copies with its own
/// seed; "derandomized" aggregates all M, and "original" is the knockoff
/// filter at alpha_ebh on the first copy. Output is a pure function of the
/// config: `workers` only changes wall time. If `observer` is set it receives
/// every rerun's statistics in (dataset, rerun) order.
ExperimentResult run_experiment(const ExperimentConfig& cfg, unsigned workers = 1,
                                const std::function<void(const RerunStatistics&)>& observer = {});

/// Selected set of `method` for one rerun's statistics.
Selection apply_method(const std::string& method, const std::vector<ImportanceVector>& statistics,
                       const ExperimentConfig& cfg);

/// dataset,rerun,method,size,power,fdp,selected (selected as 1-based indices
/// joined by ';').
void write_runs_csv(std::ostream& out, const ExperimentResult& result);

/// Metrics with ±1 SE, config echo and seed.
nlohmann::json summary_json(const ExperimentResult& result);

} // namespace dkn
