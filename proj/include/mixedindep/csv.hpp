#pragma once

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "mixedindep/errors.hpp"
#include "mixedindep/sample.hpp"

namespace mixedindep {

// Strict CSV dialect: comma separator, first row is the header, '.' decimal
// point, no quoting. Count columns must hold exact integers.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    static CsvTable read_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open CSV file '" + path + "'");
        CsvTable table;
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            std::vector<std::string> cells;
            std::stringstream ss(line);
            std::string cell;
            while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
            if (!line.empty() && line.back() == ',') cells.push_back("");
            if (table.header.empty()) {
                table.header = cells;
                continue;
            }
            if (cells.size() != table.header.size()) {
                throw ConfigError("CSV line " + std::to_string(lineno) + " has " +
                                  std::to_string(cells.size()) + " cells, header has " +
                                  std::to_string(table.header.size()));
            }
            table.rows.push_back(std::move(cells));
        }
        if (table.header.empty()) throw ConfigError("CSV file '" + path + "' is empty");
        return table;
    }

    // Resolves a column reference: exact header name, else a 0-based index.
    std::size_t column(const std::string& ref) const {
        for (std::size_t c = 0; c < header.size(); ++c) {
            if (header[c] == ref) return c;
        }
        char* end = nullptr;
        errno = 0;
        const long idx = std::strtol(ref.c_str(), &end, 10);
        if (errno == 0 && end != ref.c_str() && *end == '\0' && idx >= 0 &&
            static_cast<std::size_t>(idx) < header.size()) {
            return static_cast<std::size_t>(idx);
        }
        throw ConfigError("CSV has no column '" + ref + "'");
    }

private:
    static std::string trim(const std::string& s) {
        const auto b = s.find_first_not_of(" \t");
        if (b == std::string::npos) return "";
        const auto e = s.find_last_not_of(" \t");
        return s.substr(b, e - b + 1);
    }
};

namespace csv_detail {

inline double parse_positive_real(const std::string& cell, std::size_t row,
                                  const std::string& col) {
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(cell.c_str(), &end);
    if (cell.empty() || end != cell.c_str() + cell.size() || errno == ERANGE) {
        throw ConfigError("row " + std::to_string(row) + ", column '" + col +
                          "': cannot parse '" + cell + "' as a real number");
    }
    if (!(v > 0.0)) {
        throw InvariantError("row " + std::to_string(row) + ", column '" + col +
                             "': continuous value must be positive, got '" + cell + "'");
    }
    return v;
}

inline std::int64_t parse_count(const std::string& cell, std::size_t row,
                                const std::string& col) {
    char* end = nullptr;
    errno = 0;
    const long long v = std::strtoll(cell.c_str(), &end, 10);
    if (cell.empty() || end != cell.c_str() + cell.size() || errno == ERANGE) {
        throw InvariantError("row " + std::to_string(row) + ", column '" + col +
                             "': count value must be an exact integer, got '" + cell + "'");
    }
    if (v < 0) {
        throw InvariantError("row " + std::to_string(row) + ", column '" + col +
                             "': count value must be nonnegative, got '" + cell + "'");
    }
    return v;
}

} // namespace csv_detail

// Builds a MixedSample from named (or 0-based indexed) continuous and count
// columns. Row numbers in diagnostics are 1-based data rows (header excluded).
inline MixedSample build_sample(const CsvTable& table, const std::vector<std::string>& x_cols,
                                const std::vector<std::string>& y_cols) {
    if (x_cols.empty() || y_cols.empty()) {
        throw ConfigError("need at least one continuous and one count column");
    }
    std::vector<std::size_t> xi, yi;
    for (const auto& c : x_cols) xi.push_back(table.column(c));
    for (const auto& c : y_cols) yi.push_back(table.column(c));
    for (auto a : xi) {
        for (auto b : yi) {
            if (a == b) throw ConfigError("column '" + table.header[a] +
                                          "' listed as both continuous and count");
        }
    }
    const std::size_t n = table.rows.size();
    if (n == 0) throw ConfigError("CSV contains no data rows");
    std::vector<double> x(n * xi.size());
    std::vector<std::int64_t> y(n * yi.size());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < xi.size(); ++j) {
            x[i * xi.size() + j] =
                csv_detail::parse_positive_real(table.rows[i][xi[j]], i + 1, table.header[xi[j]]);
        }
        for (std::size_t k = 0; k < yi.size(); ++k) {
            y[i * yi.size() + k] =
                csv_detail::parse_count(table.rows[i][yi[k]], i + 1, table.header[yi[k]]);
        }
    }
    return MixedSample(std::move(x), std::move(y), xi.size(), yi.size());
}

} // namespace mixedindep
