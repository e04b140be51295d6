#include "pdeid/funclib.hpp"

#include <sstream>
#include <stdexcept>

#include "pdeid/specmat.hpp"

namespace pdeid {

namespace {

struct NameEntry {
  FunctionId id;
  std::string_view name;
};

constexpr std::array<NameEntry, 8> kNames = {{
    {FunctionId::LinExp, "lin_exp"},
    {FunctionId::LinCos, "lin_cos"},
    {FunctionId::LinSin, "lin_sin"},
    {FunctionId::LinAffineExp, "lin_affine_exp"},
    {FunctionId::AlgInv, "alg_inv"},
    {FunctionId::AlgInvSqrt, "alg_invsqrt"},
    {FunctionId::AnaArccos, "ana_arccos"},
    {FunctionId::AnaArcsin, "ana_arcsin"},
}};

[[noreturn]] void domain_violation(const TestFunction& fn, double t, double x) {
  std::ostringstream os;
  os << to_string(fn.id) << ": point (t=" << t << ", x=" << x << ") is outside the admissible domain";
  switch (fn.id) {
  case FunctionId::AlgInv:
  case FunctionId::AlgInvSqrt: os << " (requires x + t > 0)"; break;
  case FunctionId::AnaArccos:
  case FunctionId::AnaArcsin: os << " (requires a * t > 0)"; break;
  default: os << " (value is not finite)"; break;
  }
  throw DomainError(os.str());
}

double checked(const TestFunction& fn, double t, double x, double value) {
  if (!std::isfinite(value)) domain_violation(fn, t, x);
  return value;
}

// k-th derivative of cos / sin at phi.
double cos_derivative(int k, double phi) {
  switch (k % 4) {
  case 0: return std::cos(phi);
  case 1: return -std::sin(phi);
  case 2: return -std::cos(phi);
  default: return std::sin(phi);
  }
}

double sin_derivative(int k, double phi) {
  switch (k % 4) {
  case 0: return std::sin(phi);
  case 1: return std::cos(phi);
  case 2: return -std::sin(phi);
  default: return -std::cos(phi);
  }
}

// Derivatives of A(t) = arccos(sech(a t)) for a t > 0.
//   d/dt arccos(y) = -y' / sqrt(1 - y^2), y = sech(at), y' = -a sech tanh,
//   sqrt(1 - sech^2) = |tanh(at)| = tanh(at) on a t > 0, so A' = a sech(at).
// With S = sech(at), T = tanh(at): S' = -a S T, T' = a (1 - T^2), hence
//   A''   = -a^2 S T
//   A'''  =  a^3 S (2 T^2 - 1)
//   A'''' =  a^4 S T (5 - 6 T^2)
double arccos_sech_derivative(int k, double a, double t) {
  const double s = 1.0 / std::cosh(a * t);
  const double th = std::tanh(a * t);
  switch (k) {
  case 0: return std::acos(s);
  case 1: return a * s;
  case 2: return -a * a * s * th;
  case 3: return a * a * a * s * (2.0 * th * th - 1.0);
  case 4: return a * a * a * a * s * th * (5.0 - 6.0 * th * th);
  default: throw std::invalid_argument("arccos(sech) derivative order > 4");
  }
}

// arcsin(y) = pi/2 - arccos(y).
double arcsin_sech_derivative(int k, double a, double t) {
  if (k == 0) return std::asin(1.0 / std::cosh(a * t));
  return -arccos_sech_derivative(k, a, t);
}

double ipow(double base, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

} // namespace

std::string_view to_string(FunctionId id) {
  for (const auto& e : kNames)
    if (e.id == id) return e.name;
  return "unknown";
}

std::string_view to_string(PdeClass c) {
  switch (c) {
  case PdeClass::Linear: return "linear";
  case PdeClass::Algebraic: return "algebraic";
  case PdeClass::Analytic: return "analytic";
  }
  return "unknown";
}

std::string_view to_string(Uniqueness u) { return u == Uniqueness::Unique ? "Unique" : "NonUnique"; }

std::optional<FunctionId> parse_function_id(std::string_view s) {
  for (const auto& e : kNames)
    if (e.name == s) return e.id;
  return std::nullopt;
}

PdeClass TestFunction::pde_class() const {
  switch (id) {
  case FunctionId::LinExp:
  case FunctionId::LinCos:
  case FunctionId::LinSin:
  case FunctionId::LinAffineExp: return PdeClass::Linear;
  case FunctionId::AlgInv:
  case FunctionId::AlgInvSqrt: return PdeClass::Algebraic;
  case FunctionId::AnaArccos:
  case FunctionId::AnaArcsin: return PdeClass::Analytic;
  }
  return PdeClass::Linear;
}

Uniqueness TestFunction::truth() const {
  switch (id) {
  case FunctionId::LinExp:
  case FunctionId::AlgInv:
  case FunctionId::AlgInvSqrt: return Uniqueness::NonUnique;
  default: return Uniqueness::Unique;
  }
}

bool TestFunction::admissible(double t, double x) const {
  if (!std::isfinite(t) || !std::isfinite(x)) return false;
  switch (id) {
  case FunctionId::AlgInv:
  case FunctionId::AlgInvSqrt: return x + t > 0.0;
  case FunctionId::AnaArccos:
  case FunctionId::AnaArcsin: return a * t > 0.0;
  default: return true;
  }
}

double eval(const TestFunction& fn, double t, double x) {
  if (!fn.admissible(t, x)) domain_violation(fn, t, x);
  return checked(fn, t, x, eval_as<double>(fn, t, x));
}

double exact_derivative(const TestFunction& fn, int order_t, int order_x, double t, double x) {
  if (order_t < 0 || order_x < 0 || order_t + order_x > kMaxExactDerivativeOrder) {
    std::ostringstream os;
    os << "exact_derivative: unsupported order (t=" << order_t << ", x=" << order_x
       << "); total order must be in [0, " << kMaxExactDerivativeOrder << "]";
    throw std::invalid_argument(os.str());
  }
  if (order_t == 0 && order_x == 0) return eval(fn, t, x);
  if (!fn.admissible(t, x)) domain_violation(fn, t, x);
  const double a = fn.a;
  const double b = fn.b;
  const int k = order_t + order_x;
  double v = 0.0;
  switch (fn.id) {
  case FunctionId::LinExp:
    // d/dt -> 1, d/dx -> a
    v = ipow(a, order_x) * std::exp(a * x + t);
    break;
  case FunctionId::LinCos:
    // phi = x - a t, d/dt -> -a d/dphi
    v = ipow(-a, order_t) * cos_derivative(k, x - a * t);
    break;
  case FunctionId::LinSin: v = ipow(-a, order_t) * sin_derivative(k, x - a * t); break;
  case FunctionId::LinAffineExp: {
    // d^i/dt^i [(x + b t) e^{a t}] = e^{a t} (a^i (x + b t) + i b a^{i-1}); linear in x.
    const double e = std::exp(a * t);
    if (order_x == 0) {
      v = e * ipow(a, order_t) * (x + b * t);
      if (order_t > 0) v += e * order_t * b * ipow(a, order_t - 1);
    } else if (order_x == 1) {
      v = ipow(a, order_t) * e;
    } else {
      v = 0.0;
    }
    break;
  }
  case FunctionId::AlgInv: {
    // (x+t)^{-1}: k-th total derivative is (-1)^k k! (x+t)^{-k-1}
    double c = 1.0;
    for (int i = 1; i <= k; ++i) c *= -static_cast<double>(i);
    v = c * std::pow(x + t, -static_cast<double>(k) - 1.0);
    break;
  }
  case FunctionId::AlgInvSqrt: {
    double c = 1.0;
    for (int i = 0; i < k; ++i) c *= -0.5 - i;
    v = c * std::pow(x + t, -0.5 - k);
    break;
  }
  case FunctionId::AnaArccos:
  case FunctionId::AnaArcsin: {
    // u = (x + t) A(t); u_x = A(t) is x-independent.
    auto deriv = fn.id == FunctionId::AnaArccos ? arccos_sech_derivative : arcsin_sech_derivative;
    if (order_x == 0) {
      v = (x + t) * deriv(order_t, a, t);
      if (order_t > 0) v += order_t * deriv(order_t - 1, a, t);
    } else if (order_x == 1) {
      v = deriv(order_t, a, t);
    } else {
      v = 0.0;
    }
    break;
  }
  }
  return checked(fn, t, x, v);
}

Uniqueness ground_truth(const TestFunction& fn, const FeatureSpec& spec) {
  if (!spec.is_value_and_ux()) {
    throw std::invalid_argument("ground_truth: labels are only certified for G = (u, u_x), got " +
                                spec.to_string());
  }
  return fn.truth();
}

} // namespace pdeid
