#include "pdeid/sweep_config.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <stdexcept>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace pdeid {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string_view unquote(std::string_view s) {
  s = trim(s);
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) {
    s = s.substr(1, s.size() - 2);
  }
  return s;
}

// Drops a trailing `# comment` that sits outside quotes.
std::string_view strip_comment(std::string_view s) {
  char quote = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (quote) {
      if (c == quote) quote = 0;
    } else if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == '#') {
      return trim(s.substr(0, i));
    }
  }
  return trim(s);
}

std::vector<std::string_view> split_list(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '[') {
    if (text.back() != ']') throw std::invalid_argument("unterminated list '" + std::string(text) + "'");
    text = trim(text.substr(1, text.size() - 2));
  }
  std::vector<std::string_view> items;
  if (text.empty()) return items;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == ',') {
      const auto item = trim(text.substr(start, i - start));
      if (item.empty()) {
        if (i == text.size() && !items.empty()) break; // trailing comma
        throw std::invalid_argument("empty list element in '" + std::string(text) + "'");
      }
      items.push_back(item);
      start = i + 1;
    }
  }
  return items;
}

using Setter = std::function<void(SweepConfig&, std::string_view)>;

struct GridEdit {
  std::size_t n_t;
  std::size_t n_x;
  std::array<double, 4> domain;
};

std::size_t positive_count(std::string_view v) {
  const long long n = parse_integer(v);
  if (n < 2) throw std::invalid_argument("needs at least 2 points, got " + std::string(v));
  return static_cast<std::size_t>(n);
}

} // namespace

double parse_real(std::string_view text) {
  text = unquote(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw std::invalid_argument("expected a number, got '" + std::string(text) + "'");
  }
  return v;
}

long long parse_integer(std::string_view text) {
  text = unquote(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw std::invalid_argument("expected an integer, got '" + std::string(text) + "'");
  }
  return v;
}

bool parse_bool(std::string_view text) {
  text = unquote(text);
  if (text == "true") return true;
  if (text == "false") return false;
  throw std::invalid_argument("expected true or false, got '" + std::string(text) + "'");
}

std::vector<double> parse_real_list(std::string_view text) {
  std::vector<double> out;
  for (auto item : split_list(text)) out.push_back(parse_real(item));
  return out;
}

std::vector<int> parse_int_list(std::string_view text) {
  std::vector<int> out;
  for (auto item : split_list(text)) out.push_back(static_cast<int>(parse_integer(item)));
  return out;
}

std::vector<std::string> parse_string_list(std::string_view text) {
  std::vector<std::string> out;
  for (auto item : split_list(text)) out.emplace_back(unquote(item));
  return out;
}

std::vector<FunctionId> parse_function_list(std::string_view text) {
  std::vector<FunctionId> out;
  for (const auto& name : parse_string_list(text)) {
    if (name == "all") {
      out.insert(out.end(), kAllFunctions.begin(), kAllFunctions.end());
      continue;
    }
    const auto id = parse_function_id(name);
    if (!id) throw std::invalid_argument("unknown function '" + name + "'");
    out.push_back(*id);
  }
  return out;
}

std::pair<std::size_t, std::size_t> parse_grid_size(std::string_view text) {
  text = unquote(text);
  const auto pos = text.find('x');
  if (pos == std::string_view::npos) throw std::invalid_argument("grid size must look like 64x64, got '" + std::string(text) + "'");
  return {positive_count(text.substr(0, pos)), positive_count(text.substr(pos + 1))};
}

std::array<double, 4> parse_domain(std::string_view text) {
  const auto v = parse_real_list(unquote(text));
  if (v.size() != 4) throw std::invalid_argument("domain must be t_min,t_max,x_min,x_max");
  return {v[0], v[1], v[2], v[3]};
}

std::array<double, 4> grid_domain(const GridSpec& grid) {
  return {grid.t0, grid.t(grid.n_t - 1), grid.x0, grid.x(grid.n_x - 1)};
}

GridSpec make_grid(std::size_t n_t, std::size_t n_x, const std::array<double, 4>& domain) {
  return GridSpec::over(domain[0], domain[1], n_t, domain[2], domain[3], n_x);
}

SweepConfig parse_sweep_config(std::istream& in, const SweepConfig& base, const std::string& origin) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw std::invalid_argument(origin + ": " + e.message() + " (line " + std::to_string(e.line()) + ")");
  }

  SweepConfig cfg = base;
  GridEdit grid{base.grid.n_t, base.grid.n_x, grid_domain(base.grid)};
  bool grid_touched = false;

  const std::map<std::string, std::map<std::string, Setter>> table{
      {"grid",
       {
           {"n_t", [&](SweepConfig&, std::string_view v) { grid.n_t = positive_count(v); grid_touched = true; }},
           {"n_x", [&](SweepConfig&, std::string_view v) { grid.n_x = positive_count(v); grid_touched = true; }},
           {"t_min", [&](SweepConfig&, std::string_view v) { grid.domain[0] = parse_real(v); grid_touched = true; }},
           {"t_max", [&](SweepConfig&, std::string_view v) { grid.domain[1] = parse_real(v); grid_touched = true; }},
           {"x_min", [&](SweepConfig&, std::string_view v) { grid.domain[2] = parse_real(v); grid_touched = true; }},
           {"x_max", [&](SweepConfig&, std::string_view v) { grid.domain[3] = parse_real(v); grid_touched = true; }},
       }},
      {"noise",
       {
           {"levels", [](SweepConfig& c, std::string_view v) { c.noise_levels = parse_real_list(v); }},
           {"delta", [](SweepConfig& c, std::string_view v) { c.delta = parse_real(v); }},
           {"convention", [](SweepConfig& c, std::string_view v) { c.noise_convention = parse_noise_convention(unquote(v)); }},
       }},
      {"sweep",
       {
           {"functions", [](SweepConfig& c, std::string_view v) { c.functions = parse_function_list(v); }},
           {"fd_orders", [](SweepConfig& c, std::string_view v) { c.fd_orders = parse_int_list(v); }},
           {"seeds_per_cell", [](SweepConfig& c, std::string_view v) { c.seeds_per_cell = static_cast<int>(parse_integer(v)); }},
           {"master_seed",
            [](SweepConfig& c, std::string_view v) {
              const long long s = parse_integer(v);
              if (s < 0) throw std::invalid_argument("master_seed must be >= 0");
              c.master_seed = static_cast<std::uint64_t>(s);
            }},
           {"method",
            [](SweepConfig& c, std::string_view v) {
              const auto m = unquote(v);
              if (m == "auto") c.method.reset();
              else c.method = parse_method(m);
            }},
           {"features", [](SweepConfig& c, std::string_view v) { c.features = FeatureSpec::parse(v); }},
           {"a", [](SweepConfig& c, std::string_view v) { c.a = parse_real(v); }},
           {"b", [](SweepConfig& c, std::string_view v) { c.b = parse_real(v); }},
           {"threads",
            [](SweepConfig& c, std::string_view v) {
              const long long t = parse_integer(v);
              if (t < 1) throw std::invalid_argument("threads must be >= 1");
              c.threads = static_cast<unsigned>(t);
            }},
           {"record_timings", [](SweepConfig& c, std::string_view v) { c.record_timings = parse_bool(v); }},
       }},
      {"constants",
       {
           {"C", [](SweepConfig& c, std::string_view v) { c.policy.C = parse_real(v); }},
           {"c1_low_factor", [](SweepConfig& c, std::string_view v) { c.policy.c1_low_factor = parse_real(v); }},
           {"c1_up_factor", [](SweepConfig& c, std::string_view v) { c.policy.c1_up_factor = parse_real(v); }},
           {"cn_factor", [](SweepConfig& c, std::string_view v) { c.policy.cn_factor = parse_real(v); }},
           {"c_xi", [](SweepConfig& c, std::string_view v) { c.policy.c_xi = parse_real(v); }},
           {"fallback_c_u", [](SweepConfig& c, std::string_view v) { c.policy.fallback_c_u = parse_real(v); }},
           {"rounding_guard", [](SweepConfig& c, std::string_view v) { c.policy.rounding_guard = parse_bool(v); }},
       }},
  };

  for (const auto& [section, body] : tree) {
    const auto sec = table.find(section);
    if (sec == table.end()) {
      if (body.empty() && !body.data().empty()) throw std::invalid_argument(origin + ": key '" + section + "' outside of a section");
      throw std::invalid_argument(origin + ": unknown section [" + section + "]");
    }
    for (const auto& [key, node] : body) {
      const auto setter = sec->second.find(key);
      if (setter == sec->second.end()) {
        throw std::invalid_argument(origin + ": unknown key '" + key + "' in [" + section + "]");
      }
      try {
        setter->second(cfg, strip_comment(node.data()));
      } catch (const std::exception& e) {
        throw std::invalid_argument(origin + ": [" + section + "] " + key + ": " + e.what());
      }
    }
  }
  if (grid_touched) {
    try {
      cfg.grid = make_grid(grid.n_t, grid.n_x, grid.domain);
    } catch (const std::exception& e) {
      throw std::invalid_argument(origin + ": [grid] " + e.what());
    }
  }
  try {
    cfg.validate();
  } catch (const std::exception& e) {
    throw std::invalid_argument(origin + ": " + e.what());
  }
  return cfg;
}

SweepConfig load_sweep_config(const std::string& path, const SweepConfig& base) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  return parse_sweep_config(in, base, path);
}

} // namespace pdeid
