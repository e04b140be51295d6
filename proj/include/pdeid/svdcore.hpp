#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

namespace pdeid {

struct SvResult {
  std::vector<double> sigmas; ///< descending, length min(m, n)
  double rho = 0.0;           ///< sigma_min / sigma_max, in [0, 1]

  double largest() const { return sigmas.front(); }
  double smallest() const { return sigmas.back(); }
};

/// Singular values by one-sided (Hestenes) Jacobi orthogonalisation of the
/// columns. Small singular values of tall matrices keep their relative
/// accuracy; the Gram route would square the condition number.
/// Throws std::invalid_argument for an empty or all-zero matrix.
SvResult singular_values(const Eigen::MatrixXd& a);

/// max_k |sigma_k(a + e) - sigma_k(a)|; never exceeds ||e||_F.
double weyl_gap(const Eigen::MatrixXd& a, const Eigen::MatrixXd& e);

/// A threshold that is either a number or invalid (its hypothesis failed).
using Threshold = std::optional<double>;

/// eps / (c1_low - eps), clamped to [0, 1]; invalid unless c1_low > eps.
/// rho(A~) of a singular A with sigma_1(A) >= c1_low and ||E||_F <= eps stays below it.
Threshold nonunique_threshold(double eps, double c1_low);

/// (c_n - eps) / (c1_up + eps); invalid unless c_n > eps. rho(A~) of a
/// nonsingular A with sigma_n(A) >= c_n and sigma_1(A) <= c1_up stays above it.
/// Throws if c1_up < c_n or c_n <= 0.
Threshold unique_threshold(double eps, double c_n, double c1_up);

} // namespace pdeid
