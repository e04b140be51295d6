#pragma once

// Experiment sweeps: every (function, FD order, noise level, seed) case runs
// sample -> add_noise -> build matrices -> classify -> score.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pdeid/classify.hpp"
#include "pdeid/grid.hpp"

namespace pdeid {

/// {0} followed by 1e-10, 1e-9, ..., 1e-1.
std::vector<double> standard_noise_levels();

struct SweepConfig {
  std::vector<FunctionId> functions{kAllFunctions.begin(), kAllFunctions.end()};
  std::vector<int> fd_orders{2, 4, 6, 8};
  std::vector<double> noise_levels = standard_noise_levels();
  int seeds_per_cell = 5;
  GridSpec grid;
  FeatureSpec features = FeatureSpec::value_and_ux();
  double delta = 0.01;
  NoiseConvention noise_convention = NoiseConvention::Paper;
  ConstantPolicy policy;
  std::optional<Method> method; ///< empty: FRanCo for linear functions, JRC otherwise
  double a = 0.5;
  double b = 1.0;
  std::uint64_t master_seed = 0;
  unsigned threads = 1;
  bool record_timings = false;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
  Method method_for(FunctionId id) const;
  std::size_t case_count() const;
};

enum class Correct { Yes, No, Inconclusive };
std::string_view to_string(Correct c);
Correct parse_correct(std::string_view s);

enum class CaseStatus { Ok, Error };
std::string_view to_string(CaseStatus s);
CaseStatus parse_case_status(std::string_view s);

struct ResultRow {
  FunctionId function_id = FunctionId::LinExp;
  Method method = Method::Franco;
  int fd_order = 0;
  double noise_level = 0.0;
  std::uint64_t seed = 0;
  double rho_max = 0.0; ///< rho(G~) for FRanCo; max over points for JRC
  double rho_min = 0.0;
  Threshold t_nonunique;
  Threshold t_unique;
  double eps_budget = 0.0;    ///< eps_G or eps_JG
  double noise_epsilon = 0.0; ///< sup bound of the injected noise
  Label verdict = Label::Inconclusive;
  Label truth = Label::Inconclusive;
  Correct correct = Correct::Inconclusive;
  bool noise_bound_held = false; ///< realized ||e||_inf <= noise_epsilon
  CaseStatus status = CaseStatus::Ok;
  std::string flags;   ///< ';'-joined verdict flags
  std::string message; ///< error text when status = error
  std::optional<double> wall_time;

  friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

using ResultTable = std::vector<ResultRow>;

/// Per-case seed derived from (master seed, case index) through std::seed_seq.
std::uint64_t case_seed(std::uint64_t master_seed, std::size_t case_index);

/// One case. Never throws for module errors; they end up in status/message.
ResultRow run_case(FunctionId function, Method method, int fd_order, double noise_level, std::uint64_t seed,
                   const SweepConfig& config);

/// Cross product in canonical order (function, order, noise, seed index).
ResultTable run_sweep(const SweepConfig& config);

bool any_errors(const ResultTable& table);

struct CountCell {
  Method method = Method::Franco;
  int fd_order = 0;
  double noise_level = 0.0;
  int correct = 0; ///< functions classified correctly by majority over seeds
  int total = 0;   ///< functions in the cell
};

struct CountGrid {
  std::vector<CountCell> cells; ///< ordered by method, order, noise

  const CountCell* find(Method method, int fd_order, double noise_level) const;
};

/// Throws std::invalid_argument on an empty table.
CountGrid summarize(const ResultTable& table);

} // namespace pdeid
