#include "dkn/ingest/csv.hpp"

#include "dkn/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

namespace dkn {

namespace {

std::vector<std::string> split_line(const std::string& line, std::size_t line_no)
{
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cell += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cell += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            cells.push_back(std::move(cell));
            cell.clear();
        } else {
            cell += ch;
        }
    }
    if (quoted) {
        throw Error(Errc::MalformedCsv, "unterminated quote on line " + std::to_string(line_no));
    }
    cells.push_back(std::move(cell));
    return cells;
}

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) {
        return "";
    }
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

bool is_missing(const std::string& cell)
{
    const std::string t = trim(cell);
    return t.empty() || t == "NA";
}

double parse_number(const std::string& cell, const std::string& column, std::size_t row)
{
    const std::string t = trim(cell);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) {
        throw Error(Errc::MalformedCsv, "non-numeric value '" + t + "' in column '" + column + "', data row "
                                            + std::to_string(row + 1));
    }
    return v;
}

std::string format_double(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

Table read_csv(std::istream& in)
{
    Table t;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line_no == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
            line.erase(0, 3);
        }
        if (trim(line).empty()) {
            continue;
        }
        auto cells = split_line(line, line_no);
        if (!have_header) {
            for (auto& c : cells) {
                c = trim(c);
            }
            t.header = std::move(cells);
            have_header = true;
            continue;
        }
        if (cells.size() != t.header.size()) {
            throw Error(Errc::MalformedCsv, "line " + std::to_string(line_no) + " has " + std::to_string(cells.size())
                                                + " cells, header has " + std::to_string(t.header.size()));
        }
        t.rows.push_back(std::move(cells));
    }
    if (!have_header) {
        throw Error(Errc::MalformedCsv, "missing header row");
    }
    std::set<std::string> seen;
    for (const auto& h : t.header) {
        if (!seen.insert(h).second) {
            throw Error(Errc::MalformedCsv, "duplicate column '" + h + "'");
        }
    }
    return t;
}

Table read_csv_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(Errc::FileUnreadable, "cannot open '" + path + "'");
    }
    return read_csv(in);
}

Dataset clean_table(const Table& table, const CleaningOptions& options)
{
    const auto& header = table.header;
    const auto response_it = std::find(header.begin(), header.end(), options.response);
    if (options.response.empty() || response_it == header.end()) {
        throw Error(Errc::ResponseMissing, "response column '" + options.response + "' not found");
    }
    const auto response_col = static_cast<std::size_t>(response_it - header.begin());
    for (const auto& name : options.exclude) {
        if (std::find(header.begin(), header.end(), name) == header.end()) {
            throw Error(Errc::ResponseMissing, "column '" + name + "' not found");
        }
    }
    Dataset ds;
    ds.response_name = options.response;

    std::vector<std::size_t> kept_rows;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const bool missing = std::any_of(row.begin(), row.end(), is_missing);
        if (missing) {
            ds.log.push_back("drop row " + std::to_string(r + 1) + ": missing value");
        } else {
            kept_rows.push_back(r);
        }
    }

    std::vector<std::size_t> feature_cols;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (c == response_col) {
            continue;
        }
        if (std::find(options.exclude.begin(), options.exclude.end(), header[c]) != options.exclude.end()) {
            continue;
        }
        feature_cols.push_back(c);
    }

    const auto n = static_cast<Eigen::Index>(kept_rows.size());
    auto column = [&](std::size_t c) {
        Vector v(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            v(i) = parse_number(table.rows[kept_rows[static_cast<std::size_t>(i)]][c], header[c],
                                kept_rows[static_cast<std::size_t>(i)]);
        }
        return v;
    };

    ds.y = column(response_col);
    for (const auto& name : options.exclude) {
        const auto c = static_cast<std::size_t>(std::find(header.begin(), header.end(), name) - header.begin());
        const Vector v = column(c);
        ds.extras[name] = std::vector<double>(v.data(), v.data() + v.size());
    }

    std::vector<Vector> cols;
    for (const std::size_t c : feature_cols) {
        Vector v = column(c);
        const bool binary = (v.array() == 0.0 || v.array() == 1.0).all();
        if (binary && v.sum() < static_cast<double>(options.min_occurrence)) {
            ds.log.push_back("drop column '" + header[c] + "': " + std::to_string(static_cast<long>(v.sum()))
                             + " occurrences < " + std::to_string(options.min_occurrence));
            continue;
        }
        if (n < 2 || v.maxCoeff() == v.minCoeff()) {
            ds.log.push_back("drop column '" + header[c] + "': zero variance");
            continue;
        }
        cols.push_back(std::move(v));
        ds.feature_names.push_back(header[c]);
    }
    if (n < 2 || cols.empty()) {
        throw Error(Errc::EmptyAfterCleaning, std::to_string(n) + " rows and " + std::to_string(cols.size())
                                                  + " feature columns remain");
    }

    ds.X.resize(n, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) {
        Vector v = cols[j];
        if (options.standardize) {
            const double mean = v.mean();
            v.array() -= mean;
            const double sd = std::sqrt(v.squaredNorm() / static_cast<double>(n - 1));
            v /= sd;
        }
        ds.X.col(static_cast<Eigen::Index>(j)) = v;
    }
    if (options.standardize) {
        ds.log.push_back("standardize " + std::to_string(cols.size()) + " feature columns (mean 0, sample sd 1)");
    }
    return ds;
}

Dataset load_csv(const std::string& path, const CleaningOptions& options)
{
    Dataset ds = clean_table(read_csv_file(path), options);
    ds.source = path;
    return ds;
}

Dataset load_csv(const std::string& path, const std::string& response, std::size_t min_occurrence)
{
    CleaningOptions o;
    o.response = response;
    o.min_occurrence = min_occurrence;
    return load_csv(path, o);
}

Table to_table(const Dataset& ds)
{
    Table t;
    t.header = ds.feature_names;
    t.header.push_back(ds.response_name);
    for (Eigen::Index i = 0; i < ds.X.rows(); ++i) {
        std::vector<std::string> row;
        for (Eigen::Index j = 0; j < ds.X.cols(); ++j) {
            row.push_back(format_double(ds.X(i, j)));
        }
        row.push_back(format_double(ds.y(i)));
        t.rows.push_back(std::move(row));
    }
    return t;
}

} // namespace dkn
