#include "pdeid/svdcore.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace pdeid {

namespace {

constexpr int kMaxSweeps = 60;

// One-sided Jacobi on the columns of w (m >= n). On return the columns are
// mutually orthogonal and their norms are the singular values.
void orthogonalise_columns(Eigen::MatrixXd& w) {
  const Eigen::Index n = w.cols();
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double alpha = w.col(p).squaredNorm();
        const double beta = w.col(q).squaredNorm();
        const double gamma = w.col(p).dot(w.col(q));
        if (gamma == 0.0 || std::abs(gamma) <= DBL_EPSILON * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (Eigen::Index i = 0; i < w.rows(); ++i) {
          const double wp = w(i, p);
          const double wq = w(i, q);
          w(i, p) = c * wp - s * wq;
          w(i, q) = s * wp + c * wq;
        }
      }
    }
    if (!rotated) break;
  }
}

} // namespace

SvResult singular_values(const Eigen::MatrixXd& a) {
  if (a.size() == 0) throw std::invalid_argument("singular_values: empty matrix");
  if (!a.allFinite()) throw std::invalid_argument("singular_values: matrix has non-finite entries");
  // sigma(A) = sigma(A^T); work on the tall orientation
  Eigen::MatrixXd w = a.rows() >= a.cols() ? a : Eigen::MatrixXd(a.transpose());
  const double scale = w.cwiseAbs().maxCoeff();
  if (scale == 0.0) throw std::invalid_argument("singular_values: rho is undefined for the zero matrix");
  w /= scale;
  orthogonalise_columns(w);
  SvResult r;
  r.sigmas.reserve(static_cast<std::size_t>(w.cols()));
  for (Eigen::Index j = 0; j < w.cols(); ++j) r.sigmas.push_back(w.col(j).norm() * scale);
  std::sort(r.sigmas.begin(), r.sigmas.end(), std::greater<>());
  r.rho = std::clamp(r.sigmas.back() / r.sigmas.front(), 0.0, 1.0);
  return r;
}

double weyl_gap(const Eigen::MatrixXd& a, const Eigen::MatrixXd& e) {
  if (a.rows() != e.rows() || a.cols() != e.cols()) throw std::invalid_argument("weyl_gap: shape mismatch");
  auto sigmas = [](const Eigen::MatrixXd& m) {
    if (m.size() > 0 && m.cwiseAbs().maxCoeff() == 0.0)
      return std::vector<double>(static_cast<std::size_t>(std::min(m.rows(), m.cols())), 0.0);
    return singular_values(m).sigmas;
  };
  const auto s_a = sigmas(a);
  const auto s_ae = sigmas(a + e);
  double gap = 0.0;
  for (std::size_t k = 0; k < s_a.size(); ++k) gap = std::max(gap, std::abs(s_ae[k] - s_a[k]));
  return gap;
}

Threshold nonunique_threshold(double eps, double c1_low) {
  if (!(eps >= 0.0)) throw std::invalid_argument("nonunique_threshold: eps must be >= 0");
  if (!(c1_low > eps)) return std::nullopt;
  return std::clamp(eps / (c1_low - eps), 0.0, 1.0);
}

Threshold unique_threshold(double eps, double c_n, double c1_up) {
  if (!(eps >= 0.0)) throw std::invalid_argument("unique_threshold: eps must be >= 0");
  if (!(c_n > 0.0)) throw std::invalid_argument("unique_threshold: C_n must be > 0");
  if (c1_up < c_n) throw std::invalid_argument("unique_threshold: C_1^up < C_n (inconsistent constants)");
  if (!(c_n > eps)) return std::nullopt;
  return (c_n - eps) / (c1_up + eps);
}

} // namespace pdeid
