#pragma once

// Closed-form test solutions u(t,x) with hand-derived derivatives.
//
//   lin_exp         exp(a x + t)                      u_t = a^{-1} u_x = u   (non-unique for G=(u,u_x))
//   lin_cos         cos(x - a t)                      u_t = -a u_x
//   lin_sin         sin(x - a t)                      u_t = -a u_x
//   lin_affine_exp  (x + b t) exp(a t)                u_t = a u + b u_x
//   alg_inv         (x + t)^{-1}                      u_t = u_x = -u^2      (non-unique)
//   alg_invsqrt     (x + t)^{-1/2}                    u_t = u_x = -u^3/2    (non-unique)
//   ana_arccos      (x + t) arccos(sech(a t))
//   ana_arcsin      (x + t) arcsin(sech(a t))

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include "pdeid/error.hpp"

namespace pdeid {

enum class FunctionId {
  LinExp,
  LinCos,
  LinSin,
  LinAffineExp,
  AlgInv,
  AlgInvSqrt,
  AnaArccos,
  AnaArcsin,
};

inline constexpr std::array<FunctionId, 8> kAllFunctions = {
    FunctionId::LinExp,    FunctionId::LinCos,     FunctionId::LinSin,    FunctionId::LinAffineExp,
    FunctionId::AlgInv,    FunctionId::AlgInvSqrt, FunctionId::AnaArccos, FunctionId::AnaArcsin};

enum class PdeClass { Linear, Algebraic, Analytic };
enum class Uniqueness { Unique, NonUnique };

struct FeatureSpec; // specmat.hpp

std::string_view to_string(FunctionId id);
std::string_view to_string(PdeClass c);
std::string_view to_string(Uniqueness u);
std::optional<FunctionId> parse_function_id(std::string_view s);

/// One of the eight benchmark solutions together with its shape parameters.
/// Defaults a = 0.5, b = 1.0 keep every function smooth and O(1) on [1,2]^2.
struct TestFunction {
  FunctionId id = FunctionId::LinExp;
  double a = 0.5;
  double b = 1.0;

  PdeClass pde_class() const;
  /// Label for the feature set G = (u, u_x).
  Uniqueness truth() const;
  std::string_view name() const { return to_string(id); }

  /// Whether (t, x) lies in the declared admissible domain.
  bool admissible(double t, double x) const;
};

/// Closed-form value. Throws DomainError outside the admissible domain.
double eval(const TestFunction& fn, double t, double x);

/// Same closed forms over an arbitrary real type (used with multiprecision
/// samples when measuring truncation order below double round-off).
/// No domain check; callers guarantee admissibility.
template <class Real>
Real eval_as(const TestFunction& fn, const Real& t, const Real& x) {
  using std::acos;
  using std::asin;
  using std::cos;
  using std::cosh;
  using std::exp;
  using std::sin;
  using std::sqrt;
  const Real a(fn.a);
  const Real b(fn.b);
  switch (fn.id) {
  case FunctionId::LinExp: return Real(exp(Real(a * x + t)));
  case FunctionId::LinCos: return Real(cos(Real(x - a * t)));
  case FunctionId::LinSin: return Real(sin(Real(x - a * t)));
  case FunctionId::LinAffineExp: return Real((x + b * t) * exp(Real(a * t)));
  case FunctionId::AlgInv: return Real(Real(1) / (x + t));
  case FunctionId::AlgInvSqrt: return Real(Real(1) / sqrt(Real(x + t)));
  case FunctionId::AnaArccos: return Real((x + t) * acos(Real(Real(1) / cosh(Real(a * t)))));
  case FunctionId::AnaArcsin: return Real((x + t) * asin(Real(Real(1) / cosh(Real(a * t)))));
  }
  return Real(0);
}

/// d^{order_t}/dt d^{order_x}/dx u at (t, x), order_t + order_x <= 4.
double exact_derivative(const TestFunction& fn, int order_t, int order_x, double t, double x);

inline constexpr int kMaxExactDerivativeOrder = 4;

/// Scoring label; only defined for G = (u, u_x).
Uniqueness ground_truth(const TestFunction& fn, const FeatureSpec& spec);

} // namespace pdeid
