#pragma once

#include "dkn/ingest/csv.hpp"
#include "dkn/stats/lasso.hpp"

#include "json.hpp"

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <vector>

namespace dkn {

struct RealDataOptions {
    double alpha_kn = 0.05;
    double alpha_ebh = 0.1;
    double offset_c = 1.0;
    bool early_stop = true;
    std::size_t runs = 100;  // M
    std::size_t reruns = 10;
    std::uint64_t master_seed = 0;
    unsigned workers = 1;
    Family family = Family::gaussian;
    CvOptions cv;
};

struct RealDataRun {
    std::size_t rerun = 0;
    std::uint64_t seed = 0;
    std::vector<std::size_t> original;      // 0-based
    std::vector<std::size_t> derandomized;  // 0-based
};

struct RealDataSummary {
    std::vector<std::string> feature_names;
    std::vector<RealDataRun> runs;
    Vector freq_original;
    Vector freq_derandomized;
};

/// Fits second_order_model(ds.X) once, then for each rerun k draws M knockoff
/// copies with seed rerun_seed(master_seed, 0, k). "derandomized" aggregates
/// all M copies; "original" is the knockoff filter at alpha_ebh on the first.
RealDataSummary real_data_pipeline(const Dataset& ds, const RealDataOptions& options);

/// feature_name,freq_original,freq_derandomized
void write_frequencies_csv(std::ostream& out, const RealDataSummary& summary);

/// Per-run selections (by name) and discovery counts plus the frequencies.
nlohmann::json to_json(const RealDataSummary& summary);

} // namespace dkn
