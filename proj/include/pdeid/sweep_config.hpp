#pragma once

// Sweep configuration files: a small TOML subset.
//
//   [grid]       n_t, n_x, t_min, t_max, x_min, x_max
//   [noise]      levels, delta, convention
//   [sweep]      functions, fd_orders, seeds_per_cell, master_seed, method,
//                features, a, b, threads, record_timings
//   [constants]  C, c1_low_factor, c1_up_factor, cn_factor, c_xi,
//                fallback_c_u, rounding_guard
//
// One `key = value` per line, `#` comments, quoted strings, flat arrays
// written as `[1, 2, 3]`. Unknown sections or keys are errors.

#include <array>
#include <cstddef>
#include <istream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pdeid/harness.hpp"

namespace pdeid {

/// Applies the file's settings on top of `base`. Errors carry the origin and key.
SweepConfig parse_sweep_config(std::istream& in, const SweepConfig& base = {}, const std::string& origin = "<config>");
SweepConfig load_sweep_config(const std::string& path, const SweepConfig& base = {});

/// "[1e-8, 1e-4]" or "1e-8, 1e-4".
std::vector<double> parse_real_list(std::string_view text);
std::vector<int> parse_int_list(std::string_view text);
std::vector<std::string> parse_string_list(std::string_view text);
std::vector<FunctionId> parse_function_list(std::string_view text);

/// Strict number parsing: the whole token must be consumed.
double parse_real(std::string_view text);
long long parse_integer(std::string_view text);
bool parse_bool(std::string_view text);

/// "64x64" -> {n_t, n_x}.
std::pair<std::size_t, std::size_t> parse_grid_size(std::string_view text);
/// "t_min,t_max,x_min,x_max".
std::array<double, 4> parse_domain(std::string_view text);

/// n_t x n_x points spanning {t_min, t_max, x_min, x_max}.
GridSpec make_grid(std::size_t n_t, std::size_t n_x, const std::array<double, 4>& domain);
std::array<double, 4> grid_domain(const GridSpec& grid);

} // namespace pdeid
