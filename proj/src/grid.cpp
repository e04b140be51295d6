#include "pdeid/grid.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

namespace pdeid {

void GridSpec::validate() const {
  if (!(h_t > 0.0) || !(h_x > 0.0)) throw GridError("grid step sizes must be positive");
  if (n_t == 0 || n_x == 0) throw GridError("grid must contain at least one point per axis");
  if (!std::isfinite(t0) || !std::isfinite(x0)) throw GridError("grid origin must be finite");
}

GridSpec GridSpec::over(double t_lo, double t_hi, std::size_t n_t, double x_lo, double x_hi,
                        std::size_t n_x) {
  if (n_t < 2 || n_x < 2) throw GridError("GridSpec::over needs at least two points per axis");
  if (!(t_hi > t_lo) || !(x_hi > x_lo)) throw GridError("GridSpec::over needs increasing bounds");
  GridSpec g;
  g.t0 = t_lo;
  g.x0 = x_lo;
  g.n_t = n_t;
  g.n_x = n_x;
  g.h_t = (t_hi - t_lo) / static_cast<double>(n_t - 1);
  g.h_x = (x_hi - x_lo) / static_cast<double>(n_x - 1);
  return g;
}

Field sample(const TestFunction& fn, const GridSpec& grid) {
  grid.validate();
  Field f{grid, {}, Eigen::MatrixXd(grid.n_t, grid.n_x)};
  for (std::size_t i = 0; i < grid.n_t; ++i) {
    for (std::size_t j = 0; j < grid.n_x; ++j) {
      const double t = grid.t(i);
      const double x = grid.x(j);
      try {
        f.values(i, j) = eval(fn, t, x);
      } catch (const DomainError& e) {
        std::ostringstream os;
        os << "sample: grid point [" << i << "," << j << "] -> " << e.what();
        throw DomainError(os.str());
      }
    }
  }
  return f;
}

std::string_view to_string(NoiseConvention c) {
  return c == NoiseConvention::Paper ? "paper" : "linear";
}

NoiseConvention parse_noise_convention(std::string_view s) {
  if (s == "paper") return NoiseConvention::Paper;
  if (s == "linear") return NoiseConvention::Linear;
  throw std::invalid_argument("noise convention must be 'paper' or 'linear', got '" + std::string(s) + "'");
}

NoiseModel NoiseModel::calibrate(const Field& clean, double alpha, std::uint64_t seed, double delta,
                                 NoiseConvention convention) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("noise level must be >= 0");
  NoiseModel m;
  m.alpha = alpha;
  m.seed = seed;
  m.delta = delta;
  m.convention = convention;
  const double norm_sq = clean.values.squaredNorm();
  m.sigma = convention == NoiseConvention::Paper ? alpha * alpha * norm_sq : alpha * std::sqrt(norm_sq);
  m.epsilon = sup_noise_bound(m.sigma, static_cast<std::size_t>(clean.values.size()), delta);
  return m;
}

Field add_noise(const Field& field, const NoiseModel& noise) {
  Field out = field;
  if (noise.sigma == 0.0) return out;
  std::mt19937_64 rng(noise.seed);
  std::normal_distribution<double> dist(0.0, noise.sigma);
  // column-major fill; the order is part of the reproducibility contract
  for (Eigen::Index k = 0; k < out.values.size(); ++k) out.values.data()[k] += dist(rng);
  return out;
}

double sup_noise_bound(double sigma, std::size_t n_points, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("sup_noise_bound: delta must lie in (0, 1)");
  if (n_points == 0) throw std::invalid_argument("sup_noise_bound: n_points must be >= 1");
  if (!(sigma >= 0.0)) throw std::invalid_argument("sup_noise_bound: sigma must be >= 0");
  if (sigma == 0.0) return 0.0;
  return sigma * std::sqrt(2.0 * std::log(2.0 * static_cast<double>(n_points) / delta));
}

} // namespace pdeid
