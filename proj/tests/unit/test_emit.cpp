#include <cmath>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include <gtest/gtest.h>

#include "pdeid/emit.hpp"

using namespace pdeid;

namespace {

std::string header_line() {
  std::string h;
  for (const auto& c : result_columns()) {
    if (!h.empty()) h += ',';
    h += c;
  }
  return h + "\r\n";
}

ResultTable sample_table() {
  SweepConfig c;
  c.functions = {FunctionId::LinExp, FunctionId::AlgInv};
  c.fd_orders = {2, 8};
  c.noise_levels = {0.0, 1e-8, 1e-1};
  c.seeds_per_cell = 2;
  return run_sweep(c);
}

std::size_t count(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = s.find(needle); pos != std::string::npos; pos = s.find(needle, pos + 1)) ++n;
  return n;
}

} // namespace

TEST(Emit, ColumnSet) {
  const auto cols = result_columns();
  ASSERT_EQ(cols.size(), 19u);
  EXPECT_EQ(cols.front(), "function_id");
  EXPECT_EQ(cols.back(), "wall_time");
}

TEST(Emit, EmptyTableIsHeaderOnly) { EXPECT_EQ(to_csv({}), header_line()); }

TEST(Emit, CsvRoundTrip) {
  ResultTable t = sample_table();
  // awkward text survives quoting
  t[0].message = "line one\nsaid \"no\", then stopped";
  t[1].flags = "a;b,c";
  t[2].wall_time = 0.125;
  const std::string csv = to_csv(t);
  std::istringstream in(csv);
  const ResultTable back = read_csv(in);
  EXPECT_EQ(back, t);
  EXPECT_EQ(to_csv(back), csv);
}

TEST(Emit, RealFormattingRoundTrips) {
  for (double v : {0.0, 1e-10, 0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300}) {
    EXPECT_EQ(std::stod(format_real(v)), v);
  }
  EXPECT_EQ(format_real(1e-8), "1e-08");
}

TEST(Emit, InvalidThresholdsAreSpelledOut) {
  ResultRow r;
  r.t_nonunique = std::nullopt;
  r.t_unique = 0.25;
  const std::string csv = to_csv({r});
  EXPECT_NE(csv.find(",invalid,0.25,"), std::string::npos) << csv;
  const auto j = to_json(r);
  EXPECT_TRUE(j["t_nonunique"].is_null());
  EXPECT_EQ(j["t_unique"], 0.25);
}

TEST(Emit, ReadCsvErrors) {
  std::istringstream bad_header("a,b,c\r\n");
  EXPECT_THROW(read_csv(bad_header), std::invalid_argument);
  std::istringstream short_row(header_line() + "lin_exp,franco\r\n");
  try {
    read_csv(short_row);
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
  std::istringstream open_quote(header_line() + "\"lin_exp,franco\r\n");
  EXPECT_THROW(read_csv(open_quote), std::invalid_argument);
}

TEST(Emit, JsonMirrorsColumns) {
  const auto t = sample_table();
  const auto j = to_json(t);
  ASSERT_EQ(j.size(), t.size());
  for (const auto& c : result_columns()) EXPECT_TRUE(j[0].contains(c)) << c;
  EXPECT_EQ(j[0].size(), result_columns().size());
  EXPECT_EQ(j[0]["verdict"], std::string(to_string(t[0].verdict)));

  const auto g = to_json(summarize(t));
  ASSERT_FALSE(g.empty());
  for (const char* k : {"method", "fd_order", "noise_level", "correct", "total"}) EXPECT_TRUE(g[0].contains(k));
}

TEST(Emit, CountsCsv) {
  std::ostringstream out;
  write_counts_csv(out, summarize(sample_table()));
  const std::string s = out.str();
  EXPECT_EQ(s.rfind("method,fd_order,noise_level,correct,total\r\n", 0), 0u);
  EXPECT_EQ(count(s, "\r\n"), 1u + 2u * 2u * 3u);
}

TEST(Emit, SvgHasOnePanelPerNoiseLevelWithThreeSeries) {
  const auto t = sample_table();
  const std::string svg = render_svg_lines(t, FunctionId::LinExp);
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  EXPECT_EQ(count(svg, "class=\"panel\""), 3u);
  EXPECT_EQ(count(svg, "class=\"series\""), 9u);
  for (const char* s : {"rho", "t_nonunique", "t_unique"})
    EXPECT_EQ(count(svg, std::string("data-series=\"") + s + "\""), 3u) << s;
  for (const char* noise : {"data-noise=\"0\"", "data-noise=\"1e-08\"", "data-noise=\"0.1\""})
    EXPECT_NE(svg.find(noise), std::string::npos) << noise;
  EXPECT_THROW(render_svg_lines(t, FunctionId::LinCos), std::invalid_argument);
}

TEST(Emit, WriteTextFileReportsPath) {
  const std::string dir = ::testing::TempDir() + "pdeid_emit_test";
  std::filesystem::create_directories(dir);
  const std::string path = dir + "/out.csv";
  write_text_file(path, "x\n");
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "x");
  const std::string missing = dir + "/no/such/dir/out.csv";
  try {
    write_text_file(missing, "x");
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find(missing), std::string::npos);
  }
  std::filesystem::remove_all(dir);
}
