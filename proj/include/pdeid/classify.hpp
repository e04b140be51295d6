#pragma once

// Noise-robust identifiability tests.
//
// NR-FRanCo (linear PDEs) compares rho(G~) against
//   T_nu = eps_G / (C1_low - eps_G)          non-unique  => rho(G~) <= T_nu
//   T_u  = (C_n - eps_G) / (C1_up + eps_G)   unique      => rho(G~) >= T_u
// and reports whichever hypothesis the data excludes.
//
// NR-JRC (algebraic / analytic PDEs) applies the same thresholds per point to
// rho(J_G~(q)): non-uniqueness forces the bound at every point, uniqueness of
// an algebraic PDE forces the other bound at one point at least.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pdeid/specmat.hpp"
#include "pdeid/svdcore.hpp"

namespace pdeid {

enum class Label { Unique, NonUnique, Inconclusive };

std::string_view to_string(Label l);
Label parse_label(std::string_view s);
Label to_label(Uniqueness u);

enum class Method { Franco, Jrc };

std::string_view to_string(Method m);
Method parse_method(std::string_view s);
/// FRanCo for linear PDEs, JRC otherwise.
Method default_method(PdeClass c);

/// Rules turning the noisy singular values into threshold constants:
/// C1_low = c1_low_factor * s1, C1_up = c1_up_factor * s1,
/// C_n = max(C * s1, cn_factor * s_n); C_u from FD of the noisy data.
struct ConstantPolicy {
  double C = 1e-4;
  double c1_low_factor = 0.5;
  double c1_up_factor = 1.5;
  double cn_factor = 0.5;
  double c_xi = 1.0;
  /// Used (and flagged) when the grid is too small to estimate C_u.
  std::optional<double> fallback_c_u;
  /// Adds rounding_floor() to the noise bound before building budgets.
  bool rounding_guard = true;

  void validate() const;
};

struct ThresholdConstants {
  double c1_low = 0.0;
  double c1_up = 0.0;
  double c_n = 0.0;
};

ThresholdConstants threshold_constants(const SvResult& sv, const ConstantPolicy& policy);

struct CuEstimate {
  double c_u = 0.0;
  bool fallback = false;
};

/// C_u = max_{k=1..l} max_axis ||FD estimate of u~^{(n+k)}||_inf.
CuEstimate estimate_c_u(const Field& field, int max_l, int fd_order, const ConstantPolicy& policy);

struct DerivedConstants {
  BoundConstants bounds;
  ThresholdConstants thresholds;
  std::vector<std::string> flags;
};

/// C_u from the field plus threshold constants from the preview singular values.
DerivedConstants derive_constants(const Field& field, const FeatureSpec& spec, int fd_order, Method method,
                                  const SvResult& sv_preview, const ConstantPolicy& policy);

struct Verdict {
  Label label = Label::Inconclusive;
  std::vector<double> rho_values;        ///< one for FRanCo, one per point for JRC
  std::vector<Threshold> t_nonunique;    ///< aligned with rho_values
  std::vector<Threshold> t_unique;
  std::vector<std::size_t> witnesses;    ///< first indices that triggered the label
  std::size_t witness_count = 0;
  std::vector<std::string> flags;

  double rho_max() const;
  double rho_min() const;
  /// Summary thresholds: smallest valid T_nu and largest valid T_u.
  Threshold t_nonunique_summary() const;
  Threshold t_unique_summary() const;
  bool has_flag(std::string_view f) const;
};

inline constexpr std::size_t kMaxWitnesses = 32;

/// Combines the two exclusions into a label for a single rho.
Label decide(double rho, const Threshold& t_nu, const Threshold& t_u, std::vector<std::string>& flags);

/// NR-FRanCo on a feature matrix whose constants come from its own SVs.
Verdict nr_franco(const FeatureMatrix& gm, const ConstantPolicy& policy);

/// NR-FRanCo with explicit constants.
Verdict nr_franco(const FeatureMatrix& gm, const ThresholdConstants& constants);

/// NR-JRC with per-point constants from each J_G~(q).
Verdict nr_jrc(const JacobianStack& js, const ConstantPolicy& policy, PdeClass pde_class);

/// Everything needed to classify one noisy field.
struct AnalysisRequest {
  Method method = Method::Franco;
  PdeClass pde_class = PdeClass::Linear;
  FeatureSpec features = FeatureSpec::value_and_ux();
  int fd_order = 8;
  double noise_epsilon = 0.0; ///< sup bound on the data noise
  ConstantPolicy policy;
};

struct AnalysisResult {
  Verdict verdict;
  double epsilon = 0.0;     ///< perturbation bound used for the budgets
  double eps_budget = 0.0;  ///< eps_G or eps_JG
  BoundConstants bounds;
  std::optional<ThresholdConstants> constants; ///< FRanCo only (JRC is per point)
  std::optional<SvResult> sv;                  ///< FRanCo only
};

/// Estimate C_u, build G~ or J_G~, classify.
AnalysisResult analyze(const Field& noisy, const AnalysisRequest& request);

} // namespace pdeid
