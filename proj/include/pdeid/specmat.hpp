#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "pdeid/findiff.hpp"

namespace pdeid {

/// One entry g_i of the feature map G: a coordinate projection, u itself, or
/// a derivative of u.
struct Feature {
  enum class Kind { CoordT, CoordX, Value, Derivative };

  Kind kind = Kind::Value;
  int order_t = 0;
  int order_x = 0;

  static Feature coord_t() { return {Kind::CoordT, 0, 0}; }
  static Feature coord_x() { return {Kind::CoordX, 0, 0}; }
  static Feature value() { return {Kind::Value, 0, 0}; }
  static Feature derivative(int order_t, int order_x);

  /// "t", "x", "u", "u_x", "u_tx", ... (letters of the subscript in any order).
  static Feature parse(std::string_view token);
  std::string to_string() const;

  int total_order() const { return order_t + order_x; }
  bool is_coordinate() const { return kind == Kind::CoordT || kind == Kind::CoordX; }

  friend bool operator==(const Feature&, const Feature&) = default;
};

struct FeatureSpec {
  std::vector<Feature> features;

  /// Throws on an empty list, duplicates, or a derivative of total order > 2.
  void validate() const;

  /// Comma- or whitespace-separated tokens, optionally bracketed and quoted:
  /// `u, u_x` or `["u", "u_x"]`.
  static FeatureSpec parse(std::string_view text);
  static FeatureSpec value_and_ux() { return {{Feature::value(), Feature::derivative(0, 1)}}; }

  std::string to_string() const;
  bool is_value_and_ux() const { return *this == value_and_ux(); }
  std::size_t size() const { return features.size(); }

  friend bool operator==(const FeatureSpec&, const FeatureSpec&) = default;
};

/// G~ with rows at the common interior points in row-major order
/// (row = i_t * n_x_interior + j_x) and one column per feature.
struct FeatureMatrix {
  Eigen::MatrixXd values;
  double eps_G = 0.0;               ///< Frobenius-norm bound on ||G - G~||_F
  std::vector<double> column_bounds; ///< sup-norm error bound per column
  Trim trim;                        ///< common interior relative to the sampled grid
  GridSpec interior;                ///< points behind the rows
};

/// Per-point p x 2 Jacobians of the features w.r.t. (t, x).
struct JacobianStack {
  struct Point {
    std::size_t i = 0; ///< index on the sampled grid
    std::size_t j = 0;
    double t = 0.0;
    double x = 0.0;
  };

  std::vector<Point> points;
  std::vector<Eigen::MatrixX2d> matrices;
  double eps_JG = 0.0;             ///< uniform Frobenius bound per point
  Eigen::MatrixX2d entry_bounds;   ///< sup-norm error bound per entry
  Trim trim;

  std::size_t size() const { return matrices.size(); }
};

/// Largest single-axis derivative order a stencil must resolve to build G
/// (`jacobian` = false) or J_G (`jacobian` = true). Coordinates need none.
int max_stencil_order(const FeatureSpec& spec, bool jacobian);

FeatureMatrix build_feature_matrix(const Field& field, const FeatureSpec& spec, int fd_order, double epsilon,
                                   const BoundConstants& c);

JacobianStack build_jacobian_stack(const Field& field, const FeatureSpec& spec, int fd_order, double epsilon,
                                   const BoundConstants& c);

enum class MatrixKind { G, JG };

/// Returns the Frobenius-norm budget consumed by the thresholds. The budgets
/// above are already norms (not squared norms); this is the single place that
/// states the convention. Throws on a negative budget.
double effective_epsilon(double matrix_budget, MatrixKind kind);

} // namespace pdeid
