#include "pdeid/classify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace pdeid {

namespace {

void push_flag(std::vector<std::string>& flags, std::string f) {
  if (std::find(flags.begin(), flags.end(), f) == flags.end()) flags.push_back(std::move(f));
}

void record_witness(Verdict& v, std::size_t index) {
  if (v.witnesses.size() < kMaxWitnesses) v.witnesses.push_back(index);
  ++v.witness_count;
}

} // namespace

std::string_view to_string(Label l) {
  switch (l) {
  case Label::Unique: return "Unique";
  case Label::NonUnique: return "NonUnique";
  case Label::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

Label parse_label(std::string_view s) {
  if (s == "Unique") return Label::Unique;
  if (s == "NonUnique") return Label::NonUnique;
  if (s == "Inconclusive") return Label::Inconclusive;
  throw std::invalid_argument("unknown label '" + std::string(s) + "'");
}

Label to_label(Uniqueness u) { return u == Uniqueness::Unique ? Label::Unique : Label::NonUnique; }

std::string_view to_string(Method m) { return m == Method::Franco ? "franco" : "jrc"; }

Method parse_method(std::string_view s) {
  if (s == "franco") return Method::Franco;
  if (s == "jrc") return Method::Jrc;
  throw std::invalid_argument("method must be 'franco' or 'jrc', got '" + std::string(s) + "'");
}

Method default_method(PdeClass c) { return c == PdeClass::Linear ? Method::Franco : Method::Jrc; }

void ConstantPolicy::validate() const {
  if (!(C > 0.0)) throw std::invalid_argument("constant policy: C must be > 0");
  if (!(c1_low_factor > 0.0 && c1_low_factor < 1.0 && c1_up_factor > 1.0)) {
    throw std::invalid_argument("constant policy: need 0 < c1_low_factor < 1 < c1_up_factor");
  }
  if (!(cn_factor > 0.0 && cn_factor <= c1_up_factor)) {
    throw std::invalid_argument("constant policy: need 0 < cn_factor <= c1_up_factor");
  }
  if (!(c_xi >= 0.0)) throw std::invalid_argument("constant policy: C_xi must be >= 0");
  if (fallback_c_u && !(*fallback_c_u >= 0.0)) throw std::invalid_argument("constant policy: fallback C_u must be >= 0");
}

ThresholdConstants threshold_constants(const SvResult& sv, const ConstantPolicy& policy) {
  const double s1 = sv.largest();
  const double sn = sv.smallest();
  return {policy.c1_low_factor * s1, policy.c1_up_factor * s1, std::max(policy.C * s1, policy.cn_factor * sn)};
}

CuEstimate estimate_c_u(const Field& field, int max_l, int fd_order, const ConstantPolicy& policy) {
  CuEstimate est;
  for (int k = 1; k <= max_l; ++k) {
    const int deriv = fd_order + k;
    const auto width = static_cast<std::size_t>(minimal_central_order(deriv) + 1);
    if (field.grid.n_t < width || field.grid.n_x < width) {
      if (!policy.fallback_c_u) {
        throw GridError("grid too small to estimate C_u from derivative order " + std::to_string(deriv) +
                        " and no fallback C_u was supplied");
      }
      return {*policy.fallback_c_u, true};
    }
    for (Axis axis : {Axis::T, Axis::X}) est.c_u = std::max(est.c_u, derivative_estimate(field, deriv, axis).max_abs());
  }
  return est;
}

DerivedConstants derive_constants(const Field& field, const FeatureSpec& spec, int fd_order, Method method,
                                  const SvResult& sv_preview, const ConstantPolicy& policy) {
  policy.validate();
  DerivedConstants d;
  const auto cu = estimate_c_u(field, max_stencil_order(spec, method == Method::Jrc), fd_order, policy);
  d.bounds = {cu.c_u, policy.c_xi};
  if (cu.fallback) d.flags.emplace_back("c_u-fallback");
  d.thresholds = threshold_constants(sv_preview, policy);
  return d;
}

double Verdict::rho_max() const { return rho_values.empty() ? 0.0 : *std::max_element(rho_values.begin(), rho_values.end()); }
double Verdict::rho_min() const { return rho_values.empty() ? 0.0 : *std::min_element(rho_values.begin(), rho_values.end()); }

Threshold Verdict::t_nonunique_summary() const {
  Threshold best;
  for (const auto& t : t_nonunique)
    if (t && (!best || *t < *best)) best = t;
  return best;
}

Threshold Verdict::t_unique_summary() const {
  Threshold best;
  for (const auto& t : t_unique)
    if (t && (!best || *t > *best)) best = t;
  return best;
}

bool Verdict::has_flag(std::string_view f) const { return std::find(flags.begin(), flags.end(), f) != flags.end(); }

Label decide(double rho, const Threshold& t_nu, const Threshold& t_u, std::vector<std::string>& flags) {
  if (!t_nu) push_flag(flags, "t_nonunique-invalid");
  if (!t_u) push_flag(flags, "t_unique-invalid");
  const bool excludes_nonunique = t_nu && rho > *t_nu;
  const bool excludes_unique = t_u && rho < *t_u;
  if (excludes_nonunique && excludes_unique) {
    push_flag(flags, "contradiction");
    return Label::Inconclusive;
  }
  if (excludes_nonunique) return Label::Unique;
  if (excludes_unique) return Label::NonUnique;
  return Label::Inconclusive;
}

Verdict nr_franco(const FeatureMatrix& gm, const ConstantPolicy& policy) {
  policy.validate();
  return nr_franco(gm, threshold_constants(singular_values(gm.values), policy));
}

Verdict nr_franco(const FeatureMatrix& gm, const ThresholdConstants& constants) {
  if (gm.values.rows() <= gm.values.cols()) throw std::invalid_argument("nr_franco: need m > p");
  const SvResult sv = singular_values(gm.values);
  const double eps = effective_epsilon(gm.eps_G, MatrixKind::G);
  Verdict v;
  v.rho_values = {sv.rho};
  v.t_nonunique = {nonunique_threshold(eps, constants.c1_low)};
  v.t_unique = {unique_threshold(eps, constants.c_n, constants.c1_up)};
  v.label = decide(sv.rho, v.t_nonunique[0], v.t_unique[0], v.flags);
  if (v.label != Label::Inconclusive) record_witness(v, 0);
  return v;
}

Verdict nr_jrc(const JacobianStack& js, const ConstantPolicy& policy, PdeClass pde_class) {
  policy.validate();
  if (js.size() == 0) throw std::invalid_argument("nr_jrc: empty Jacobian stack");
  const double eps = effective_epsilon(js.eps_JG, MatrixKind::JG);
  Verdict v;
  v.rho_values.reserve(js.size());
  v.t_nonunique.reserve(js.size());
  v.t_unique.reserve(js.size());

  std::vector<std::size_t> unique_witnesses;
  std::size_t evaluated = 0;
  std::size_t below_unique = 0;
  bool any_t_nu_invalid = false;
  bool any_t_u_invalid = false;
  for (std::size_t q = 0; q < js.size(); ++q) {
    const Eigen::MatrixXd jm = js.matrices[q];
    if (jm.cwiseAbs().maxCoeff() == 0.0) {
      push_flag(v.flags, "zero-jacobian-skipped");
      v.rho_values.push_back(0.0);
      v.t_nonunique.emplace_back();
      v.t_unique.emplace_back();
      continue;
    }
    ++evaluated;
    const SvResult sv = singular_values(jm);
    const ThresholdConstants c = threshold_constants(sv, policy);
    const Threshold t_nu = nonunique_threshold(eps, c.c1_low);
    const Threshold t_u = unique_threshold(eps, c.c_n, c.c1_up);
    v.rho_values.push_back(sv.rho);
    v.t_nonunique.push_back(t_nu);
    v.t_unique.push_back(t_u);
    any_t_nu_invalid |= !t_nu;
    any_t_u_invalid |= !t_u;
    if (t_nu && sv.rho > *t_nu) unique_witnesses.push_back(q);
    if (t_u && sv.rho < *t_u) ++below_unique;
  }
  if (any_t_nu_invalid) push_flag(v.flags, "t_nonunique-invalid");
  if (any_t_u_invalid) push_flag(v.flags, "t_unique-invalid");
  if (evaluated == 0) {
    push_flag(v.flags, "no-valid-points");
    return v;
  }

  // exists q: rho_q > T_nu(q)  excludes non-uniqueness (algebraic and analytic)
  // forall q: rho_q < T_u(q)   excludes uniqueness (algebraic only)
  const bool excludes_nonunique = !unique_witnesses.empty();
  const bool excludes_unique = below_unique == evaluated;
  if (excludes_nonunique && excludes_unique) {
    push_flag(v.flags, "contradiction");
    v.label = Label::Inconclusive;
  } else if (excludes_nonunique) {
    v.label = Label::Unique;
    for (std::size_t q : unique_witnesses) record_witness(v, q);
  } else if (excludes_unique) {
    if (pde_class == PdeClass::Analytic) {
      push_flag(v.flags, "analytic-one-direction");
      v.label = Label::Inconclusive;
    } else {
      v.label = Label::NonUnique;
      v.witness_count = evaluated;
    }
  }
  return v;
}

AnalysisResult analyze(const Field& noisy, const AnalysisRequest& request) {
  request.policy.validate();
  request.features.validate();
  if (!(request.noise_epsilon >= 0.0)) throw std::invalid_argument("analyze: noise epsilon must be >= 0");
  const int n = request.fd_order;
  const bool jacobian = request.method == Method::Jrc;

  AnalysisResult res;
  const auto cu = estimate_c_u(noisy, max_stencil_order(request.features, jacobian), n, request.policy);
  res.bounds = {cu.c_u, request.policy.c_xi};
  res.epsilon = request.noise_epsilon;
  if (request.policy.rounding_guard) res.epsilon += rounding_floor(n, noisy.max_abs());

  if (!jacobian) {
    const FeatureMatrix gm = build_feature_matrix(noisy, request.features, n, res.epsilon, res.bounds);
    res.sv = singular_values(gm.values);
    res.constants = threshold_constants(*res.sv, request.policy);
    res.verdict = nr_franco(gm, *res.constants);
    res.eps_budget = gm.eps_G;
  } else {
    const JacobianStack js = build_jacobian_stack(noisy, request.features, n, res.epsilon, res.bounds);
    res.verdict = nr_jrc(js, request.policy, request.pde_class);
    res.eps_budget = js.eps_JG;
  }
  if (cu.fallback) res.verdict.flags.emplace_back("c_u-fallback");
  return res;
}

} // namespace pdeid
