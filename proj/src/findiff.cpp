#include "pdeid/findiff.hpp"

#include <cfloat>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace pdeid {

namespace {

using boost::multiprecision::cpp_int;

// Coefficients (ascending powers of s) of prod_{i in nodes} (s + shift_i).
std::vector<cpp_int> expand_product(const std::vector<cpp_int>& shifts) {
  std::vector<cpp_int> poly{1};
  for (const auto& d : shifts) {
    std::vector<cpp_int> next(poly.size() + 1, 0);
    for (std::size_t j = 0; j < poly.size(); ++j) {
      next[j] += poly[j] * d;
      next[j + 1] += poly[j];
    }
    poly = std::move(next);
  }
  return poly;
}

cpp_int factorial(int k) {
  cpp_int r = 1;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

// m-th derivative at the centre of w_unit(s) = prod_{k=0}^{n} (s + n/2 - k).
Rational node_polynomial_derivative(int n, int m) {
  std::vector<cpp_int> shifts;
  for (int k = 0; k <= n; ++k) shifts.emplace_back(n / 2 - k);
  const auto poly = expand_product(shifts);
  if (m >= static_cast<int>(poly.size())) return Rational(0);
  return Rational(factorial(m) * poly[m]);
}

double stirling2(int j, int i) {
  if (j == i) return 1.0;
  if (i == 0 || i > j) return 0.0;
  return i * stirling2(j - 1, i) + stirling2(j - 1, i - 1);
}

double binomial(int l, int j) {
  double r = 1.0;
  for (int i = 1; i <= j; ++i) r = r * (l - j + i) / i;
  return r;
}

void check_order(int n, int l, int max_l) {
  if (n < 2 || n % 2 != 0) {
    throw std::invalid_argument("finite-difference order must be even and >= 2, got " + std::to_string(n));
  }
  if (l < 1 || l > max_l || l > n) {
    std::ostringstream os;
    os << "derivative order " << l << " unsupported for stencil order " << n << " (need 1 <= l <= min("
       << max_l << ", n))";
    throw std::invalid_argument(os.str());
  }
}

void check_step(double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("step size must be positive and finite");
}

constexpr int kMaxStencilDeriv = 3;

Stencil make_stencil(int n, int l, double h) {
  Stencil s;
  s.order = n;
  s.deriv = l;
  s.h = h;
  s.unit_weights = lagrange_weights(n, l);
  const double scale = std::pow(h, -l);
  s.weights.reserve(s.unit_weights.size());
  for (const auto& w : s.unit_weights) s.weights.push_back(static_cast<double>(w) * scale);
  return s;
}

bool same_step(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b)); }

} // namespace

std::string_view to_string(Axis axis) { return axis == Axis::T ? "t" : "x"; }

std::vector<Rational> lagrange_weights(int n, int l) {
  if (n < 0 || n % 2 != 0 || l < 0 || l > n) {
    throw std::invalid_argument("lagrange_weights: need even n and 0 <= l <= n");
  }
  std::vector<Rational> w;
  w.reserve(n + 1);
  const cpp_int l_fact = factorial(l);
  for (int k = 0; k <= n; ++k) {
    // L_k(s) = prod_{i != k} (s + c - i) / (k - i), s measured from the centre c = n/2
    std::vector<cpp_int> shifts;
    cpp_int denom = 1;
    for (int i = 0; i <= n; ++i) {
      if (i == k) continue;
      shifts.emplace_back(n / 2 - i);
      denom *= (k - i);
    }
    const auto poly = expand_product(shifts);
    cpp_int num = l_fact * poly[l];
    // boost::rational over cpp_int rejects negative denominators
    if (denom < 0) {
      num = -num;
      denom = -denom;
    }
    w.emplace_back(Rational(num, denom));
  }
  return w;
}

Stencil lagrange_stencil(int n, int l, double h) {
  check_order(n, l, kMaxStencilDeriv);
  check_step(h);
  return make_stencil(n, l, h);
}

Field apply_stencil(const Field& field, const Stencil& stencil, Axis axis) {
  const std::size_t width = stencil.weights.size();
  const std::size_t extent = axis == Axis::T ? field.grid.n_t : field.grid.n_x;
  const double step = axis == Axis::T ? field.grid.h_t : field.grid.h_x;
  if (!same_step(step, stencil.h)) {
    std::ostringstream os;
    os << "apply_stencil: stencil step " << stencil.h << " does not match grid step " << step << " along "
       << to_string(axis);
    throw GridError(os.str());
  }
  if (extent < width) {
    std::ostringstream os;
    os << "apply_stencil: " << extent << " points along " << to_string(axis) << " cannot host a " << width
       << "-point stencil";
    throw GridError(os.str());
  }
  const std::size_t half = static_cast<std::size_t>(stencil.half_width());
  const Eigen::Index out_len = static_cast<Eigen::Index>(extent - width + 1);
  // Sum with the h = 1 weights and scale once: the low-order stencils have
  // dyadic unit weights, so polynomials of low degree cancel exactly.
  std::vector<double> coeff = stencil.weights;
  double scale = 1.0;
  if (stencil.unit_weights.size() == width) {
    for (std::size_t k = 0; k < width; ++k) coeff[k] = static_cast<double>(stencil.unit_weights[k]);
    scale = std::pow(stencil.h, -stencil.deriv);
  }
  Field out;
  out.grid = field.grid;
  out.trim = field.trim;
  if (axis == Axis::T) {
    out.values = Eigen::MatrixXd::Zero(out_len, field.values.cols());
    for (std::size_t k = 0; k < width; ++k) {
      if (coeff[k] == 0.0) continue;
      out.values.noalias() += coeff[k] * field.values.middleRows(static_cast<Eigen::Index>(k), out_len);
    }
    out.values *= scale;
    out.grid.t0 = field.grid.t(half);
    out.grid.n_t = static_cast<std::size_t>(out_len);
    out.trim.t += half;
  } else {
    out.values = Eigen::MatrixXd::Zero(field.values.rows(), out_len);
    for (std::size_t k = 0; k < width; ++k) {
      if (coeff[k] == 0.0) continue;
      out.values.noalias() += coeff[k] * field.values.middleCols(static_cast<Eigen::Index>(k), out_len);
    }
    out.values *= scale;
    out.grid.x0 = field.grid.x(half);
    out.grid.n_x = static_cast<std::size_t>(out_len);
    out.trim.x += half;
  }
  return out;
}

Field mixed_derivative(const Field& field, int l_t, int l_x, int n) {
  if (l_t < 0 || l_x < 0 || l_t + l_x > 3) {
    throw std::invalid_argument("mixed_derivative: need l_t, l_x >= 0 and l_t + l_x <= 3");
  }
  Field out = field;
  if (l_x > 0) out = apply_stencil(out, lagrange_stencil(n, l_x, field.grid.h_x), Axis::X);
  if (l_t > 0) out = apply_stencil(out, lagrange_stencil(n, l_t, field.grid.h_t), Axis::T);
  return out;
}

double noise_amplification(int n, int l, double h) {
  check_order(n, l, kMaxStencilDeriv);
  check_step(h);
  double sum = 0.0;
  for (const auto& w : lagrange_weights(n, l)) sum += std::abs(static_cast<double>(w));
  return sum * std::pow(h, -l);
}

void BoundConstants::validate() const {
  if (!(c_u >= 0.0) || !std::isfinite(c_u)) throw std::invalid_argument("C_u must be finite and >= 0");
  if (!(c_xi >= 0.0) || !std::isfinite(c_xi)) throw std::invalid_argument("C_xi must be finite and >= 0");
}

double truncation_bound(int n, int l, double h, const BoundConstants& c) {
  check_order(n, l, kMaxStencilDeriv);
  check_step(h);
  c.validate();
  if (c.c_u == 0.0) return 0.0;
  double sum = 0.0;
  for (int j = 0; j < l; ++j) {
    double xi_factor = 1.0;
    if (j > 0) {
      xi_factor = 0.0;
      for (int i = 1; i <= j; ++i) xi_factor += stirling2(j, i) * std::pow(c.c_xi, i);
    }
    const int m = l - j;
    const double w_m = std::abs(static_cast<double>(node_polynomial_derivative(n, m)));
    sum += binomial(l, j) * xi_factor * w_m * std::pow(h, n + 1 - m);
  }
  return c.c_u * sum / static_cast<double>(factorial(n + 1));
}

double e_fd(int n, int l, double h, double epsilon, const BoundConstants& c) {
  if (!(epsilon >= 0.0)) throw std::invalid_argument("e_fd: epsilon must be >= 0");
  return truncation_bound(n, l, h, c) + epsilon * noise_amplification(n, l, h);
}

double e_fd_mixed(int n, int l_t, int l_x, double h_t, double h_x, double epsilon, const BoundConstants& c) {
  if (l_t < 0 || l_x < 0 || l_t + l_x > 3) {
    throw std::invalid_argument("e_fd_mixed: need l_t, l_x >= 0 and l_t + l_x <= 3");
  }
  if (!(epsilon >= 0.0)) throw std::invalid_argument("e_fd_mixed: epsilon must be >= 0");
  double err = epsilon;
  if (l_x > 0) err = e_fd(n, l_x, h_x, err, c);
  if (l_t > 0) err = e_fd(n, l_t, h_t, err, c);
  return err;
}

double rounding_floor(int n, double max_abs) { return 2.0 * (n + 2) * DBL_EPSILON * max_abs; }

int minimal_central_order(int deriv) {
  if (deriv < 1) throw std::invalid_argument("minimal_central_order: derivative order must be >= 1");
  return deriv % 2 == 0 ? deriv : deriv + 1;
}

Field derivative_estimate(const Field& field, int deriv, Axis axis) {
  const int n = minimal_central_order(deriv);
  const double h = axis == Axis::T ? field.grid.h_t : field.grid.h_x;
  return apply_stencil(field, make_stencil(n, deriv, h), axis);
}

} // namespace pdeid
