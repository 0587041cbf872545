#pragma once

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "wtgeprp/forecast.hpp"

namespace wtgeprp {

struct SeriesSummary {
    std::size_t length = 0;
    double min = 0.0, max = 0.0, mean = 0.0;
};

inline SeriesSummary summarize(const std::vector<double>& values) {
    SeriesSummary s;
    s.length = values.size();
    if (values.empty()) return s;
    s.min = values[0];
    s.max = values[0];
    double sum = 0.0;
    for (double v : values) {
        s.min = std::min(s.min, v);
        s.max = std::max(s.max, v);
        sum += v;
    }
    s.mean = sum / static_cast<double>(values.size());
    return s;
}

namespace detail {

inline std::vector<std::string> csv_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(trimmed(cur));
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    out.push_back(trimmed(cur));
    return out;
}

}  // namespace detail

// Loads a UTF-8 CSV with a header row.  `column` selects the value column;
// the first column doubles as index labels when it is not the value column.
// Blank or non-numeric value cells are rejected with the 1-based data row
// number.
inline SeriesDataset load_csv(const std::string& path, const std::string& column) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("'" + path + "': empty file");
    const auto header = detail::csv_fields(line);
    std::size_t value_col = header.size();
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == column) value_col = i;
    if (value_col == header.size())
        throw std::runtime_error("'" + path + "': column '" + column + "' not found");
    const bool first_is_label = value_col != 0;

    SeriesDataset ds;
    ds.name = std::filesystem::path(path).stem().string();
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (detail::trimmed(line).empty()) continue;
        ++row;
        const auto fields = detail::csv_fields(line);
        if (fields.size() != header.size())
            throw std::runtime_error("'" + path + "': row " + std::to_string(row) + ": expected " +
                                     std::to_string(header.size()) + " fields, got " +
                                     std::to_string(fields.size()));
        const std::string& cell = fields[value_col];
        if (cell.empty())
            throw std::runtime_error("'" + path + "': row " + std::to_string(row) +
                                     ": blank value in column '" + column + "'");
        double v = 0.0;
        std::size_t used = 0;
        try {
            v = std::stod(cell, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != cell.size())
            throw std::runtime_error("'" + path + "': row " + std::to_string(row) +
                                     ": non-numeric value '" + cell + "'");
        if (!std::isfinite(v))
            throw std::runtime_error("'" + path + "': row " + std::to_string(row) +
                                     ": non-finite value '" + cell + "'");
        ds.values.push_back(v);
        if (first_is_label) ds.labels.push_back(fields[0]);
    }
    if (ds.values.size() < 2 * kWindowSize)
        throw std::runtime_error("'" + path + "': series too short (" +
                                 std::to_string(ds.values.size()) + " rows, need >= " +
                                 std::to_string(2 * kWindowSize) + ")");
    return ds;
}

}  // namespace wtgeprp
