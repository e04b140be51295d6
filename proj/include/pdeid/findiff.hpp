#pragma once

// Central finite differences from Lagrange basis derivatives, and the
// certified error bound
//
//   |u^(l)(x_c) - p_n^(l)(u~, x_c)| <= |r_n^(l)(u, x_c)| + eps * sum_k |L_{n,k}^(l)(x_c)|
//
// for noise |u~ - u| <= eps, where x_c = x_{n/2} is the stencil centre.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "pdeid/grid.hpp"

namespace pdeid {

using Rational = boost::multiprecision::cpp_rational;

enum class Axis { T, X };

std::string_view to_string(Axis axis);

/// Weights of the order-n central difference for the l-th derivative.
/// weights[k] multiplies u(x_0 + k h); the evaluation point is x_{n/2}.
struct Stencil {
  int order = 2;
  int deriv = 1;
  double h = 1.0;
  std::vector<Rational> unit_weights; ///< exact weights for h = 1
  std::vector<double> weights;        ///< unit_weights * h^{-deriv}, rounded once

  int half_width() const { return order / 2; }
  std::size_t size() const { return weights.size(); }
};

/// Exact weights L_{n,k}^{(l)}(n/2) on unit-spaced nodes 0..n, for any
/// 0 <= l <= n. Differentiates the expanded Lagrange basis symbolically.
std::vector<Rational> lagrange_weights(int n, int l);

/// Public stencil constructor: n even >= 2, 1 <= l <= min(3, n), h > 0.
Stencil lagrange_stencil(int n, int l, double h);

/// Applies the stencil along one axis. The result covers the interior only:
/// n/2 points are dropped at both ends of that axis and recorded in `trim`.
Field apply_stencil(const Field& field, const Stencil& stencil, Axis axis);

/// d^{l_t}/dt d^{l_x}/dx with order-n stencils: the x pass runs first, then
/// the t pass. l_t + l_x <= 3.
Field mixed_derivative(const Field& field, int l_t, int l_x, int n);

/// sum_k |weights[k]|, the factor multiplying eps in e_fd. O(h^{-l}).
double noise_amplification(int n, int l, double h);

/// Constants of the remainder bound: ||u^{(n+k)}||_inf <= c_u and
/// ||xi^{(k)}||_inf <= c_xi for k = 1..l.
struct BoundConstants {
  double c_u = 1.0;
  double c_xi = 1.0;

  void validate() const;
};

/// Bound on |r_n^{(l)}(u, x_{n/2})|.
///
/// With r_n(x) = u^{(n+1)}(xi(x)) w(x) / (n+1)!, w(x) = prod_k (x - x_k),
/// Leibniz gives
///
///   r_n^{(l)} = sum_{j=0}^{l} C(l,j) D^j[u^{(n+1)} o xi] w^{(l-j)} / (n+1)!.
///
/// The j = l term vanishes at the centre because w(x_{n/2}) = 0. By Faa di
/// Bruno, D^j[u^{(n+1)} o xi] = sum_{i=1}^{j} u^{(n+1+i)}(xi) B_{j,i}(xi', ...),
/// and with every factor bounded, |B_{j,i}| <= S(j,i) c_xi^i (Stirling numbers
/// of the second kind). Hence
///
///   |r_n^{(l)}| <= c_u / (n+1)! * sum_{j<l} C(l,j) P_j(c_xi) |w^{(l-j)}(x_{n/2})|,
///   P_0 = 1, P_j(c) = sum_{i=1}^{j} S(j,i) c^i,
///
/// with w^{(m)}(x_{n/2}) = h^{n+1-m} w_unit^{(m)}(0). Because w is odd about
/// the centre its even derivatives vanish there, which leaves
///
///   l = 1: c_u h^n ((n/2)!)^2 / (n+1)!
///   l = 2: 2 c_xi c_u h^n ((n/2)!)^2 / (n+1)!
///   l = 3: c_u (|w_unit'''(0)| h^{n-2} + 3 (c_xi^2 + c_xi) ((n/2)!)^2 h^n) / (n+1)!
///
/// Only the highest derivative needed is u^{(n+l)}.
double truncation_bound(int n, int l, double h, const BoundConstants& c);

/// truncation_bound + epsilon * noise_amplification.
double e_fd(int n, int l, double h, double epsilon, const BoundConstants& c);

/// Error of mixed_derivative: the total error of the x pass acts as the data
/// perturbation of the t pass. A zero order skips that pass.
double e_fd_mixed(int n, int l_t, int l_x, double h_t, double h_x, double epsilon, const BoundConstants& c);

/// Perturbation floor for data held in double precision: representation error
/// of the samples plus accumulated rounding of an (n+1)-term dot product.
double rounding_floor(int n, double max_abs);

/// Smallest even central order whose stencil resolves a derivative of order `deriv`.
int minimal_central_order(int deriv);

/// Central estimate of an arbitrary-order pure derivative along one axis
/// (minimal-width stencil). Used to estimate c_u from data.
Field derivative_estimate(const Field& field, int deriv, Axis axis);

/// Weights of `s` scaled by h^{-deriv} in an arbitrary real type.
template <class Real>
std::vector<Real> weights_as(const Stencil& s, const Real& h) {
  Real scale(1);
  for (int i = 0; i < s.deriv; ++i) scale *= h;
  std::vector<Real> w;
  w.reserve(s.unit_weights.size());
  for (const auto& r : s.unit_weights) {
    Real num(static_cast<Real>(boost::multiprecision::numerator(r)));
    Real den(static_cast<Real>(boost::multiprecision::denominator(r)));
    w.push_back(num / den / scale);
  }
  return w;
}

/// Applies weights to a 1-D sample line; output has samples.size() - n entries.
template <class Real>
std::vector<Real> differentiate_line(std::span<const Real> samples, std::span<const Real> weights) {
  std::vector<Real> out;
  if (samples.size() < weights.size()) return out;
  const std::size_t m = samples.size() - weights.size() + 1;
  out.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    Real acc(0);
    for (std::size_t k = 0; k < weights.size(); ++k) acc += weights[k] * samples[i + k];
    out.push_back(acc);
  }
  return out;
}

} // namespace pdeid
