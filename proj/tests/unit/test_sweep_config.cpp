#include <cstdio>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "pdeid/sweep_config.hpp"

using namespace pdeid;

namespace {

SweepConfig parse(const std::string& text, const SweepConfig& base = {}) {
  std::istringstream in(text);
  return parse_sweep_config(in, base, "test.toml");
}

std::string error_of(const std::string& text) {
  try {
    parse(text);
  } catch (const std::invalid_argument& e) {
    return e.what();
  }
  return {};
}

} // namespace

TEST(SweepConfig, EmptyFileKeepsBase) {
  SweepConfig base;
  base.seeds_per_cell = 9;
  const auto c = parse("# nothing here\n", base);
  EXPECT_EQ(c.seeds_per_cell, 9);
  EXPECT_EQ(c.fd_orders, base.fd_orders);
  EXPECT_EQ(c.noise_levels, base.noise_levels);
}

TEST(SweepConfig, AllSections) {
  const auto c = parse(R"([grid]
n_t = 32
n_x = 48
t_min = 0.5
t_max = 1.5
x_min = 1
x_max = 3

[noise]
levels = [0, 1e-8, 1e-4]   # three levels
delta = 0.05
convention = "linear"

[sweep]
functions = ["lin_exp", "alg_inv"]
fd_orders = [4, 6]
seeds_per_cell = 3
master_seed = 42
method = "jrc"
features = ["u", "u_x"]
a = 0.25
b = 2
threads = 2
record_timings = true

[constants]
C = 1e-3
c1_low_factor = 0.25
c1_up_factor = 2
cn_factor = 0.4
c_xi = 1.5
fallback_c_u = 10
rounding_guard = false
)");
  EXPECT_EQ(c.grid.n_t, 32u);
  EXPECT_EQ(c.grid.n_x, 48u);
  EXPECT_DOUBLE_EQ(c.grid.t0, 0.5);
  EXPECT_NEAR(c.grid.t(31), 1.5, 1e-14);
  EXPECT_NEAR(c.grid.x(47), 3.0, 1e-14);
  EXPECT_EQ(c.noise_levels, (std::vector<double>{0.0, 1e-8, 1e-4}));
  EXPECT_EQ(c.delta, 0.05);
  EXPECT_EQ(c.noise_convention, NoiseConvention::Linear);
  EXPECT_EQ(c.functions, (std::vector<FunctionId>{FunctionId::LinExp, FunctionId::AlgInv}));
  EXPECT_EQ(c.fd_orders, (std::vector<int>{4, 6}));
  EXPECT_EQ(c.seeds_per_cell, 3);
  EXPECT_EQ(c.master_seed, 42u);
  EXPECT_EQ(c.method, Method::Jrc);
  EXPECT_TRUE(c.features.is_value_and_ux());
  EXPECT_EQ(c.a, 0.25);
  EXPECT_EQ(c.b, 2.0);
  EXPECT_EQ(c.threads, 2u);
  EXPECT_TRUE(c.record_timings);
  EXPECT_EQ(c.policy.C, 1e-3);
  EXPECT_EQ(c.policy.c1_low_factor, 0.25);
  EXPECT_EQ(c.policy.c1_up_factor, 2.0);
  EXPECT_EQ(c.policy.cn_factor, 0.4);
  EXPECT_EQ(c.policy.c_xi, 1.5);
  EXPECT_EQ(c.policy.fallback_c_u, 10.0);
  EXPECT_FALSE(c.policy.rounding_guard);
}

TEST(SweepConfig, PartialGridKeepsOtherDimensions) {
  const auto c = parse("[grid]\nn_x = 32\n");
  EXPECT_EQ(c.grid.n_t, 64u);
  EXPECT_EQ(c.grid.n_x, 32u);
  EXPECT_DOUBLE_EQ(c.grid.x0, 1.0);
  EXPECT_NEAR(c.grid.x(31), 2.0, 1e-14);
}

TEST(SweepConfig, MethodAutoAndFunctionAll) {
  SweepConfig base;
  base.method = Method::Franco;
  const auto c = parse("[sweep]\nmethod = auto\nfunctions = all\n", base);
  EXPECT_FALSE(c.method.has_value());
  EXPECT_EQ(c.functions.size(), 8u);
}

TEST(SweepConfig, ErrorsNameOriginAndKey) {
  EXPECT_NE(error_of("[sweeps]\nx = 1\n").find("unknown section [sweeps]"), std::string::npos);
  EXPECT_NE(error_of("[sweep]\nseed = 1\n").find("unknown key 'seed'"), std::string::npos);
  const auto bad = error_of("[sweep]\nfd_orders = [4, five]\n");
  EXPECT_NE(bad.find("test.toml"), std::string::npos) << bad;
  EXPECT_NE(bad.find("fd_orders"), std::string::npos) << bad;
  EXPECT_NE(error_of("[sweep]\nfd_orders = [3]\n").find("even order"), std::string::npos);
  EXPECT_NE(error_of("[noise]\nlevels = [1e-2, 1e-3]\n").find("ascending"), std::string::npos);
  EXPECT_NE(error_of("[sweep]\nfunctions = [\"lin_tan\"]\n").find("lin_tan"), std::string::npos);
  EXPECT_NE(error_of("[sweep]\nrecord_timings = yes\n").find("true or false"), std::string::npos);
  EXPECT_NE(error_of("[grid]\nn_t = 1\n").find("n_t"), std::string::npos);
  EXPECT_NE(error_of("[grid]\nt_min = 3\n").find("[grid]"), std::string::npos);
  EXPECT_FALSE(error_of("[sweep]\nthreads = 2\nthreads = 3\n").empty());
  EXPECT_FALSE(error_of("[constants]\nc1_low_factor = 1.5\n").empty());
  EXPECT_FALSE(error_of("[sweep]\nmaster_seed = -1\n").empty());
}

TEST(SweepConfig, LoadFromFile) {
  const std::string path = ::testing::TempDir() + "pdeid_cfg_test.toml";
  {
    std::ofstream out(path);
    out << "[sweep]\nseeds_per_cell = 2\n";
  }
  EXPECT_EQ(load_sweep_config(path).seeds_per_cell, 2);
  std::remove(path.c_str());
  try {
    load_sweep_config(path);
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find(path), std::string::npos);
  }
}

TEST(SweepConfig, ScalarAndListParsers) {
  EXPECT_EQ(parse_real("1e-8"), 1e-8);
  EXPECT_EQ(parse_real("+2.5"), 2.5);
  EXPECT_THROW(parse_real("1e-8x"), std::invalid_argument);
  EXPECT_THROW(parse_real(""), std::invalid_argument);
  EXPECT_EQ(parse_integer("17"), 17);
  EXPECT_THROW(parse_integer("1.5"), std::invalid_argument);
  EXPECT_TRUE(parse_bool("true"));
  EXPECT_EQ(parse_real_list("[1, 2.5, 1e-3]"), (std::vector<double>{1, 2.5, 1e-3}));
  EXPECT_EQ(parse_real_list("1e-8, 1e-4"), (std::vector<double>{1e-8, 1e-4}));
  EXPECT_TRUE(parse_real_list("[]").empty());
  EXPECT_THROW(parse_real_list("[1, , 2]"), std::invalid_argument);
  EXPECT_THROW(parse_real_list("[1, 2"), std::invalid_argument);
  EXPECT_EQ(parse_int_list("[2, 4,]"), (std::vector<int>{2, 4}));
  EXPECT_EQ(parse_string_list(R"(["a", 'b', c])"), (std::vector<std::string>{"a", "b", "c"}));
}

TEST(SweepConfig, GridHelpers) {
  EXPECT_EQ(parse_grid_size("64x32"), (std::pair<std::size_t, std::size_t>{64, 32}));
  EXPECT_THROW(parse_grid_size("64"), std::invalid_argument);
  EXPECT_THROW(parse_grid_size("1x64"), std::invalid_argument);
  EXPECT_EQ(parse_domain("1,2,0,3"), (std::array<double, 4>{1, 2, 0, 3}));
  EXPECT_THROW(parse_domain("1,2,3"), std::invalid_argument);
  const GridSpec g = make_grid(64, 64, {1, 2, 1, 2});
  EXPECT_DOUBLE_EQ(g.h_t, GridSpec::standard().h_t);
  const auto d = grid_domain(g);
  EXPECT_DOUBLE_EQ(d[0], 1.0);
  EXPECT_NEAR(d[1], 2.0, 1e-14);
}
