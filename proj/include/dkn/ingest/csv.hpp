#pragma once

#include "dkn/numerics/linalg.hpp"

#include <cstddef>
#include <istream>
#include <map>
#include <string>
#include <vector>

namespace dkn {

/// Raw comma-separated cells with the header row split off.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

/// Parses comma-separated text (optional double-quoted cells, CRLF or LF line
/// ends, blank lines skipped). Throws MalformedCsv on a missing header,
/// duplicate column names or a row whose width differs from the header.
Table read_csv(std::istream& in);

/// Throws FileUnreadable if the file cannot be opened.
Table read_csv_file(const std::string& path);

struct Dataset {
    Matrix X;
    Vector y;
    std::vector<std::string> feature_names;
    std::string response_name;
    std::string source;
    std::vector<std::string> log;  // cleaning steps in the order applied
    std::map<std::string, std::vector<double>> extras;  // excluded columns, cleaned rows only
};

struct CleaningOptions {
    std::string response;
    std::size_t min_occurrence = 3;
    std::vector<std::string> exclude;  // kept out of X, returned in extras
    bool standardize = true;
};

/// Drops rows with a missing cell ("NA" or empty), then binary 0/1 feature
/// columns with fewer than min_occurrence ones, then zero-variance columns,
/// then standardizes every remaining feature to mean 0 and sample variance 1.
/// The response is left on its own scale. Throws ResponseMissing,
/// MalformedCsv (non-numeric cell), EmptyAfterCleaning.
Dataset clean_table(const Table& table, const CleaningOptions& options);

/// read_csv_file followed by clean_table.
Dataset load_csv(const std::string& path, const std::string& response, std::size_t min_occurrence = 3);
Dataset load_csv(const std::string& path, const CleaningOptions& options);

/// The dataset as a table (features then response, round-trip precision).
Table to_table(const Dataset& ds);

} // namespace dkn
