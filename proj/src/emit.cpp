#include "pdeid/emit.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "pdeid/sweep_config.hpp"

namespace pdeid {

namespace {

constexpr std::string_view kInvalid = "invalid";

std::string format_threshold(const Threshold& t) { return t ? format_real(*t) : std::string(kInvalid); }

Threshold parse_threshold(std::string_view s) {
  if (s == kInvalid) return std::nullopt;
  return parse_real(s);
}

void write_field(std::ostream& out, std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) {
    out << s;
    return;
  }
  out << '"';
  for (char c : s) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

std::vector<std::string> row_fields(const ResultRow& r) {
  return {std::string(to_string(r.function_id)),
          std::string(to_string(r.method)),
          std::to_string(r.fd_order),
          format_real(r.noise_level),
          std::to_string(r.seed),
          format_real(r.rho_max),
          format_real(r.rho_min),
          format_threshold(r.t_nonunique),
          format_threshold(r.t_unique),
          format_real(r.eps_budget),
          format_real(r.noise_epsilon),
          std::string(to_string(r.verdict)),
          std::string(to_string(r.truth)),
          std::string(to_string(r.correct)),
          r.noise_bound_held ? "true" : "false",
          std::string(to_string(r.status)),
          r.flags,
          r.message,
          r.wall_time ? format_real(*r.wall_time) : std::string()};
}

// One RFC 4180 record; false at end of input. Quoted fields may span lines.
bool read_record(std::istream& in, std::vector<std::string>& fields, std::size_t& line) {
  fields.clear();
  if (in.peek() == std::char_traits<char>::eof()) return false;
  std::string field;
  bool quoted = false;
  bool after_quote = false;
  ++line;
  for (;;) {
    const int ci = in.get();
    if (ci == std::char_traits<char>::eof()) {
      if (quoted) throw std::invalid_argument("csv line " + std::to_string(line) + ": unterminated quoted field");
      fields.push_back(std::move(field));
      return true;
    }
    const char c = static_cast<char>(ci);
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get();
          field.push_back('"');
        } else {
          quoted = false;
          after_quote = true;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
      after_quote = false;
    } else if (c == '\r' && in.peek() == '\n') {
      continue;
    } else if (c == '\n') {
      fields.push_back(std::move(field));
      return true;
    } else if (c == '"' && field.empty() && !after_quote) {
      quoted = true;
    } else {
      if (after_quote) throw std::invalid_argument("csv line " + std::to_string(line) + ": text after closing quote");
      field.push_back(c);
    }
  }
}

ResultRow parse_row(const std::vector<std::string>& f) {
  ResultRow r;
  const auto fn = parse_function_id(f[0]);
  if (!fn) throw std::invalid_argument("unknown function '" + f[0] + "'");
  r.function_id = *fn;
  r.method = parse_method(f[1]);
  r.fd_order = static_cast<int>(parse_integer(f[2]));
  r.noise_level = parse_real(f[3]);
  {
    std::uint64_t seed = 0;
    const auto [ptr, ec] = std::from_chars(f[4].data(), f[4].data() + f[4].size(), seed);
    if (ec != std::errc() || ptr != f[4].data() + f[4].size()) throw std::invalid_argument("bad seed '" + f[4] + "'");
    r.seed = seed;
  }
  r.rho_max = parse_real(f[5]);
  r.rho_min = parse_real(f[6]);
  r.t_nonunique = parse_threshold(f[7]);
  r.t_unique = parse_threshold(f[8]);
  r.eps_budget = parse_real(f[9]);
  r.noise_epsilon = parse_real(f[10]);
  r.verdict = parse_label(f[11]);
  r.truth = parse_label(f[12]);
  r.correct = parse_correct(f[13]);
  r.noise_bound_held = parse_bool(f[14]);
  r.status = parse_case_status(f[15]);
  r.flags = f[16];
  r.message = f[17];
  if (!f[18].empty()) r.wall_time = parse_real(f[18]);
  return r;
}

nlohmann::json threshold_json(const Threshold& t) { return t ? nlohmann::json(*t) : nlohmann::json(nullptr); }

std::string escape_xml(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
    case '&': out += "&amp;"; break;
    case '<': out += "&lt;"; break;
    case '>': out += "&gt;"; break;
    case '"': out += "&quot;"; break;
    default: out.push_back(c);
    }
  }
  return out;
}

std::string fixed(double v) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(2);
  os << v;
  return os.str();
}

} // namespace

const std::vector<std::string>& result_columns() {
  static const std::vector<std::string> columns{
      "function_id", "method",  "fd_order", "noise_level", "seed",    "rho_max",          "rho_min",
      "t_nonunique", "t_unique", "eps_budget", "noise_epsilon", "verdict", "truth", "correct",
      "noise_bound_held", "status", "flags", "message", "wall_time"};
  return columns;
}

std::string format_real(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw std::runtime_error("format_real: conversion failed");
  return std::string(buf, ptr);
}

void write_csv(std::ostream& out, const ResultTable& table) {
  const auto& cols = result_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << "\r\n";
  for (const auto& row : table) {
    const auto fields = row_fields(row);
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out << ',';
      write_field(out, fields[i]);
    }
    out << "\r\n";
  }
}

std::string to_csv(const ResultTable& table) {
  std::ostringstream os;
  write_csv(os, table);
  return os.str();
}

ResultTable read_csv(std::istream& in) {
  std::vector<std::string> fields;
  std::size_t line = 0;
  if (!read_record(in, fields, line) || fields != result_columns()) {
    throw std::invalid_argument("csv line 1: header does not match the result columns");
  }
  ResultTable table;
  while (read_record(in, fields, line)) {
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (fields.size() != result_columns().size()) {
      throw std::invalid_argument("csv line " + std::to_string(line) + ": expected " +
                                  std::to_string(result_columns().size()) + " fields, got " +
                                  std::to_string(fields.size()));
    }
    try {
      table.push_back(parse_row(fields));
    } catch (const std::exception& e) {
      throw std::invalid_argument("csv line " + std::to_string(line) + ": " + e.what());
    }
  }
  return table;
}

nlohmann::json to_json(const ResultRow& r) {
  nlohmann::json j;
  j["function_id"] = to_string(r.function_id);
  j["method"] = to_string(r.method);
  j["fd_order"] = r.fd_order;
  j["noise_level"] = r.noise_level;
  j["seed"] = r.seed;
  j["rho_max"] = r.rho_max;
  j["rho_min"] = r.rho_min;
  j["t_nonunique"] = threshold_json(r.t_nonunique);
  j["t_unique"] = threshold_json(r.t_unique);
  j["eps_budget"] = r.eps_budget;
  j["noise_epsilon"] = r.noise_epsilon;
  j["verdict"] = to_string(r.verdict);
  j["truth"] = to_string(r.truth);
  j["correct"] = to_string(r.correct);
  j["noise_bound_held"] = r.noise_bound_held;
  j["status"] = to_string(r.status);
  j["flags"] = r.flags;
  j["message"] = r.message;
  j["wall_time"] = r.wall_time ? nlohmann::json(*r.wall_time) : nlohmann::json(nullptr);
  return j;
}

nlohmann::json to_json(const ResultTable& table) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : table) arr.push_back(to_json(r));
  return arr;
}

nlohmann::json to_json(const CountGrid& grid) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : grid.cells) {
    arr.push_back({{"method", to_string(c.method)},
                   {"fd_order", c.fd_order},
                   {"noise_level", c.noise_level},
                   {"correct", c.correct},
                   {"total", c.total}});
  }
  return arr;
}

void write_counts_csv(std::ostream& out, const CountGrid& grid) {
  out << "method,fd_order,noise_level,correct,total\r\n";
  for (const auto& c : grid.cells) {
    out << to_string(c.method) << ',' << c.fd_order << ',' << format_real(c.noise_level) << ',' << c.correct << ','
        << c.total << "\r\n";
  }
}

std::string render_svg_lines(const ResultTable& table, FunctionId function) {
  // first row of each (noise, order) cell
  std::map<double, std::map<int, const ResultRow*>> cells;
  for (const auto& r : table) {
    if (r.function_id != function || r.status != CaseStatus::Ok) continue;
    auto& slot = cells[r.noise_level][r.fd_order];
    if (!slot) slot = &r;
  }
  if (cells.empty()) {
    throw std::invalid_argument("no successful rows for function " + std::string(to_string(function)));
  }

  std::vector<int> orders;
  double lo = 1.0;
  for (const auto& [noise, by_order] : cells) {
    for (const auto& [n, r] : by_order) {
      orders.push_back(n);
      for (double v : {r->rho_max, r->t_nonunique.value_or(0.0), r->t_unique.value_or(0.0)})
        if (v > 0.0) lo = std::min(lo, v);
    }
  }
  std::sort(orders.begin(), orders.end());
  orders.erase(std::unique(orders.begin(), orders.end()), orders.end());
  const double log_lo = std::floor(std::log10(lo)) - (lo >= 1.0 ? 1.0 : 0.0);
  const double log_hi = 0.0;

  constexpr double kPanelW = 260, kPanelH = 220, kMarginL = 50, kMarginT = 30, kPlotW = 190, kPlotH = 150;
  const double width = kPanelW * static_cast<double>(cells.size());
  const double height = kPanelH + 30;

  auto x_of = [&](int n) {
    if (orders.size() == 1) return kMarginL + kPlotW / 2;
    const auto k = std::find(orders.begin(), orders.end(), n) - orders.begin();
    return kMarginL + kPlotW * static_cast<double>(k) / static_cast<double>(orders.size() - 1);
  };
  auto y_of = [&](double v) {
    const double lv = v > 0.0 ? std::clamp(std::log10(v), log_lo, log_hi) : log_lo;
    return kMarginT + kPlotH * (log_hi - lv) / (log_hi - log_lo);
  };

  struct Series {
    const char* key;
    const char* color;
    const char* dash;
  };
  const Series series[] = {{"rho", "#1f77b4", ""}, {"t_nonunique", "#d62728", "6,3"}, {"t_unique", "#2ca02c", "2,3"}};

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(width) << "\" height=\"" << fixed(height)
     << "\" viewBox=\"0 0 " << fixed(width) << ' ' << fixed(height) << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<title>" << escape_xml(to_string(function)) << ": rho and thresholds vs FD order</title>\n";

  std::size_t p = 0;
  for (const auto& [noise, by_order] : cells) {
    const double ox = kPanelW * static_cast<double>(p++);
    os << "<g class=\"panel\" data-noise=\"" << format_real(noise) << "\" transform=\"translate(" << fixed(ox)
       << ",0)\">\n";
    os << "<text x=\"" << fixed(kMarginL + kPlotW / 2) << "\" y=\"16\" text-anchor=\"middle\">noise "
       << format_real(noise) << "</text>\n";
    os << "<rect x=\"" << fixed(kMarginL) << "\" y=\"" << fixed(kMarginT) << "\" width=\"" << fixed(kPlotW)
       << "\" height=\"" << fixed(kPlotH) << "\" fill=\"none\" stroke=\"#888\"/>\n";
    for (int e = static_cast<int>(log_lo); e <= static_cast<int>(log_hi); e += std::max(1, static_cast<int>(log_hi - log_lo) / 4)) {
      os << "<text x=\"" << fixed(kMarginL - 4) << "\" y=\"" << fixed(y_of(std::pow(10.0, e)) + 4)
         << "\" text-anchor=\"end\">1e" << e << "</text>\n";
    }
    for (int n : orders) {
      os << "<text x=\"" << fixed(x_of(n)) << "\" y=\"" << fixed(kMarginT + kPlotH + 14) << "\" text-anchor=\"middle\">"
         << n << "</text>\n";
    }
    for (const auto& s : series) {
      os << "<polyline class=\"series\" data-series=\"" << s.key << "\" fill=\"none\" stroke=\"" << s.color
         << "\" stroke-width=\"1.5\"";
      if (*s.dash) os << " stroke-dasharray=\"" << s.dash << "\"";
      os << " points=\"";
      bool first = true;
      for (const auto& [n, r] : by_order) {
        Threshold v;
        if (std::string_view(s.key) == "rho") v = r->rho_max;
        else if (std::string_view(s.key) == "t_nonunique") v = r->t_nonunique;
        else v = r->t_unique;
        if (!v) continue;
        os << (first ? "" : " ") << fixed(x_of(n)) << ',' << fixed(y_of(*v));
        first = false;
      }
      os << "\"/>\n";
    }
    os << "</g>\n";
  }
  double lx = 10;
  for (const auto& s : series) {
    os << "<line x1=\"" << fixed(lx) << "\" y1=\"" << fixed(height - 10) << "\" x2=\"" << fixed(lx + 20) << "\" y2=\""
       << fixed(height - 10) << "\" stroke=\"" << s.color << "\" stroke-width=\"1.5\"";
    if (*s.dash) os << " stroke-dasharray=\"" << s.dash << "\"";
    os << "/><text x=\"" << fixed(lx + 24) << "\" y=\"" << fixed(height - 6) << "\">" << s.key << "</text>\n";
    lx += 110;
  }
  os << "</svg>\n";
  return os.str();
}

void write_text_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

} // namespace pdeid
