#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

#include <Eigen/Core>

#include "pdeid/funclib.hpp"

namespace pdeid {

/// Equispaced space-time grid; t_i = t0 + i h_t, x_j = x0 + j h_x.
struct GridSpec {
  double t0 = 1.0;
  double x0 = 1.0;
  double h_t = 1.0 / 63.0;
  double h_x = 1.0 / 63.0;
  std::size_t n_t = 64;
  std::size_t n_x = 64;

  double t(std::size_t i) const { return t0 + static_cast<double>(i) * h_t; }
  double x(std::size_t j) const { return x0 + static_cast<double>(j) * h_x; }
  std::size_t size() const { return n_t * n_x; }

  /// Throws GridError when steps are not positive or the grid is empty.
  void validate() const;

  /// n points spanning [lo, hi] on each axis.
  static GridSpec over(double t_lo, double t_hi, std::size_t n_t, double x_lo, double x_hi,
                       std::size_t n_x);

  /// 64 x 64 over [1,2] x [1,2].
  static GridSpec standard() { return {}; }
};

/// Points removed from each end of each axis relative to the sampled grid.
struct Trim {
  std::size_t t = 0;
  std::size_t x = 0;

  friend bool operator==(const Trim&, const Trim&) = default;
};

/// Samples on a grid; values(i, j) sits at (grid.t(i), grid.x(j)).
/// `grid` always describes the points actually stored, `trim` records how far
/// inside the originally sampled grid they lie.
struct Field {
  GridSpec grid;
  Trim trim;
  Eigen::MatrixXd values;

  double max_abs() const { return values.cwiseAbs().maxCoeff(); }
};

/// values(i, j) = eval(fn, t_i, x_j). Throws DomainError naming the first
/// offending point.
Field sample(const TestFunction& fn, const GridSpec& grid);

enum class NoiseConvention {
  Paper,  ///< std = alpha^2 ||u||_2^2
  Linear, ///< std = alpha ||u||_2
};

std::string_view to_string(NoiseConvention c);
NoiseConvention parse_noise_convention(std::string_view s);

/// Gaussian noise model calibrated on a clean field.
struct NoiseModel {
  double alpha = 0.0;
  std::uint64_t seed = 0;
  double delta = 0.01;
  NoiseConvention convention = NoiseConvention::Paper;
  double sigma = 0.0;   ///< per-entry standard deviation
  double epsilon = 0.0; ///< sup bound holding with probability >= 1 - delta

  /// Derives sigma from the discrete 2-norm of `clean` and epsilon from the
  /// union bound over all of its entries.
  static NoiseModel calibrate(const Field& clean, double alpha, std::uint64_t seed, double delta = 0.01,
                              NoiseConvention convention = NoiseConvention::Paper);
};

/// Adds i.i.d. N(0, sigma^2) draws; reproducible from noise.seed.
Field add_noise(const Field& field, const NoiseModel& noise);

/// sigma * sqrt(2 ln(2 n / delta)): P(max_i |e_i| >= eps) <= delta for n
/// i.i.d. N(0, sigma^2) draws.
double sup_noise_bound(double sigma, std::size_t n_points, double delta);

} // namespace pdeid
