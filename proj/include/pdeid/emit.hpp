#pragma once

// Result artifacts: CSV (RFC 4180), JSON and a line-plot SVG.

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "pdeid/harness.hpp"

namespace pdeid {

/// Column order of the result CSV; JSON rows use the same keys.
const std::vector<std::string>& result_columns();

/// Shortest text that parses back to the same double.
std::string format_real(double v);

void write_csv(std::ostream& out, const ResultTable& table);
std::string to_csv(const ResultTable& table);
/// Inverse of write_csv. Throws std::invalid_argument with the line number.
ResultTable read_csv(std::istream& in);

nlohmann::json to_json(const ResultRow& row);
nlohmann::json to_json(const ResultTable& table);
nlohmann::json to_json(const CountGrid& grid);

/// method,fd_order,noise_level,correct,total
void write_counts_csv(std::ostream& out, const CountGrid& grid);

/// One panel per noise level, each with rho and both thresholds against FD
/// order on a log axis. Uses the first seed of every (order, noise) cell of
/// the given function. Throws if the table has no rows for it.
std::string render_svg_lines(const ResultTable& table, FunctionId function);

/// Writes `content` to `path`; failures name the path.
void write_text_file(const std::string& path, std::string_view content);

} // namespace pdeid
