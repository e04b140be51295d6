#include "pdeid/harness.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>

#include "pdeid/specmat.hpp"

namespace pdeid {

std::vector<double> standard_noise_levels() {
  std::vector<double> levels{0.0};
  // parsed from text so the levels equal the literals 1e-10 ... 1e-1 exactly
  for (int k = 10; k >= 1; --k) levels.push_back(std::stod("1e-" + std::to_string(k)));
  return levels;
}

void SweepConfig::validate() const {
  if (functions.empty()) throw std::invalid_argument("sweep.functions must not be empty");
  if (fd_orders.empty()) throw std::invalid_argument("sweep.fd_orders must not be empty");
  for (int n : fd_orders) {
    if (n < 2 || n % 2 != 0) {
      throw std::invalid_argument("sweep.fd_orders: " + std::to_string(n) + " is not an even order >= 2");
    }
  }
  if (noise_levels.empty()) throw std::invalid_argument("noise.levels must not be empty");
  for (std::size_t i = 0; i < noise_levels.size(); ++i) {
    if (!(noise_levels[i] >= 0.0) || !std::isfinite(noise_levels[i])) {
      throw std::invalid_argument("noise.levels must be finite and >= 0");
    }
    if (i > 0 && !(noise_levels[i] > noise_levels[i - 1])) {
      throw std::invalid_argument("noise.levels must be strictly ascending");
    }
  }
  if (seeds_per_cell < 1) throw std::invalid_argument("sweep.seeds_per_cell must be >= 1");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("noise.delta must lie in (0, 1)");
  if (threads < 1) throw std::invalid_argument("sweep.threads must be >= 1");
  grid.validate();
  features.validate();
  policy.validate();
}

Method SweepConfig::method_for(FunctionId id) const {
  return method ? *method : default_method(TestFunction{id, a, b}.pde_class());
}

std::size_t SweepConfig::case_count() const {
  return functions.size() * fd_orders.size() * noise_levels.size() * static_cast<std::size_t>(seeds_per_cell);
}

std::string_view to_string(Correct c) {
  switch (c) {
  case Correct::Yes: return "yes";
  case Correct::No: return "no";
  case Correct::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

Correct parse_correct(std::string_view s) {
  if (s == "yes") return Correct::Yes;
  if (s == "no") return Correct::No;
  if (s == "inconclusive") return Correct::Inconclusive;
  throw std::invalid_argument("unknown correctness '" + std::string(s) + "'");
}

std::string_view to_string(CaseStatus s) { return s == CaseStatus::Ok ? "ok" : "error"; }

CaseStatus parse_case_status(std::string_view s) {
  if (s == "ok") return CaseStatus::Ok;
  if (s == "error") return CaseStatus::Error;
  throw std::invalid_argument("unknown status '" + std::string(s) + "'");
}

std::uint64_t case_seed(std::uint64_t master_seed, std::size_t case_index) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(case_index), static_cast<std::uint32_t>(std::uint64_t(case_index) >> 32)};
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (std::uint64_t(out[0]) << 32) | out[1];
}

ResultRow run_case(FunctionId function, Method method, int fd_order, double noise_level, std::uint64_t seed,
                   const SweepConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  ResultRow row;
  row.function_id = function;
  row.method = method;
  row.fd_order = fd_order;
  row.noise_level = noise_level;
  row.seed = seed;
  const TestFunction fn{function, config.a, config.b};
  try {
    row.truth = to_label(ground_truth(fn, config.features));
    const Field clean = sample(fn, config.grid);
    const NoiseModel noise = NoiseModel::calibrate(clean, noise_level, seed, config.delta, config.noise_convention);
    const Field noisy = add_noise(clean, noise);
    row.noise_epsilon = noise.epsilon;
    row.noise_bound_held = (noisy.values - clean.values).cwiseAbs().maxCoeff() <= noise.epsilon;

    AnalysisRequest req;
    req.method = method;
    req.pde_class = fn.pde_class();
    req.features = config.features;
    req.fd_order = fd_order;
    req.noise_epsilon = noise.epsilon;
    req.policy = config.policy;
    const AnalysisResult res = analyze(noisy, req);

    row.rho_max = res.verdict.rho_max();
    row.rho_min = res.verdict.rho_min();
    row.t_nonunique = res.verdict.t_nonunique_summary();
    row.t_unique = res.verdict.t_unique_summary();
    row.eps_budget = res.eps_budget;
    row.verdict = res.verdict.label;
    for (std::size_t i = 0; i < res.verdict.flags.size(); ++i) {
      if (i) row.flags += ';';
      row.flags += res.verdict.flags[i];
    }
  } catch (const std::exception& e) {
    row.status = CaseStatus::Error;
    row.verdict = Label::Inconclusive;
    row.message = e.what();
  }
  if (row.verdict == Label::Inconclusive) row.correct = Correct::Inconclusive;
  else row.correct = row.verdict == row.truth ? Correct::Yes : Correct::No;
  if (config.record_timings) {
    row.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  return row;
}

ResultTable run_sweep(const SweepConfig& config) {
  config.validate();
  struct CaseSpec {
    FunctionId fn;
    int order;
    double noise;
  };
  std::vector<CaseSpec> cases;
  cases.reserve(config.case_count());
  for (FunctionId fn : config.functions)
    for (int n : config.fd_orders)
      for (double level : config.noise_levels)
        for (int s = 0; s < config.seeds_per_cell; ++s) cases.push_back({fn, n, level});

  ResultTable table(cases.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cases.size(); i = next++) {
      const CaseSpec& c = cases[i];
      table[i] = run_case(c.fn, config.method_for(c.fn), c.order, c.noise, case_seed(config.master_seed, i), config);
    }
  };
  const unsigned n_threads = std::min<std::size_t>(config.threads, std::max<std::size_t>(cases.size(), 1));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < n_threads; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return table;
}

bool any_errors(const ResultTable& table) {
  return std::any_of(table.begin(), table.end(), [](const ResultRow& r) { return r.status == CaseStatus::Error; });
}

const CountCell* CountGrid::find(Method method, int fd_order, double noise_level) const {
  for (const auto& c : cells)
    if (c.method == method && c.fd_order == fd_order && c.noise_level == noise_level) return &c;
  return nullptr;
}

CountGrid summarize(const ResultTable& table) {
  if (table.empty()) throw std::invalid_argument("summarize: empty table");
  using CellKey = std::tuple<Method, int, double>;
  struct Votes {
    int yes = 0;
    int total = 0;
  };
  std::map<CellKey, std::map<FunctionId, Votes>> votes;
  for (const auto& r : table) {
    auto& v = votes[{r.method, r.fd_order, r.noise_level}][r.function_id];
    ++v.total;
    if (r.correct == Correct::Yes) ++v.yes;
  }
  CountGrid grid;
  for (const auto& [key, per_fn] : votes) {
    CountCell cell{std::get<0>(key), std::get<1>(key), std::get<2>(key), 0, 0};
    for (const auto& [fn, v] : per_fn) {
      ++cell.total;
      if (2 * v.yes > v.total) ++cell.correct;
    }
    grid.cells.push_back(cell);
  }
  return grid;
}

} // namespace pdeid
