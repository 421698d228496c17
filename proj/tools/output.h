#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace arbor::cli {

using Cell = std::variant<double, std::int64_t, bool, std::string>;

/// A result table plus the metadata record echoed in every output.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    nlohmann::ordered_json metadata = nlohmann::ordered_json::object();

    void add_row(std::vector<Cell> row);
    std::size_t column(const std::string& name) const;
};

/// Shortest round-trip decimal form; "inf", "-inf" and "nan" for non-finite values.
std::string format_double(double v);

/// Metadata as a "# {...}" comment line, a header row, then RFC 4180 rows.
void write_csv(const Table& t, std::ostream& out);

/// {"metadata": ..., "columns": [...], "rows": [[...], ...]}
void write_json(const Table& t, std::ostream& out);

/// Line plot of the numeric columns `ys` against `x`.
std::string render_svg(const Table& t, const std::string& x, const std::vector<std::string>& ys,
                       const std::string& title);
std::string render_ascii(const Table& t, const std::string& x, const std::vector<std::string>& ys,
                         int width = 72, int height = 20);

/// Phase map over two numeric columns, one symbol or color per label.
std::string render_map_svg(const Table& t, const std::string& x, const std::string& y,
                           const std::string& label, const std::string& title);
std::string render_map_ascii(const Table& t, const std::string& x, const std::string& y,
                             const std::string& label);

}  // namespace arbor::cli
