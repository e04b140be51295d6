#include "pdeid/specmat.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace pdeid {

namespace {

using Index2 = std::pair<int, int>; // (order_t, order_x)

// Derivative multi-index of u behind a non-coordinate feature.
Index2 index_of(const Feature& f) { return {f.order_t, f.order_x}; }

Trim relative_trim(Index2 idx, int n) {
  const std::size_t half = static_cast<std::size_t>(n / 2);
  return {idx.first > 0 ? half : 0, idx.second > 0 ? half : 0};
}

Field derivative_field(const Field& field, Index2 idx, int n) {
  const auto [ot, ox] = idx;
  if (ot == 0 && ox == 0) return field;
  if (ot > 0 && ox > 0) return mixed_derivative(field, ot, ox, n);
  if (ot > 0) return apply_stencil(field, lagrange_stencil(n, ot, field.grid.h_t), Axis::T);
  return apply_stencil(field, lagrange_stencil(n, ox, field.grid.h_x), Axis::X);
}

double derivative_bound(const GridSpec& g, Index2 idx, int n, double epsilon, const BoundConstants& c) {
  const auto [ot, ox] = idx;
  if (ot == 0 && ox == 0) return epsilon;
  if (ot > 0 && ox > 0) return e_fd_mixed(n, ot, ox, g.h_t, g.h_x, epsilon, c);
  if (ot > 0) return e_fd(n, ot, g.h_t, epsilon, c);
  return e_fd(n, ox, g.h_x, epsilon, c);
}

// Cache of derivative fields keyed by multi-index, all cut to one interior.
class DerivativeTable {
public:
  DerivativeTable(const Field& field, int n) : field_(field), n_(n) {}

  void require(Index2 idx) {
    const Trim r = relative_trim(idx, n_);
    interior_.t = std::max(interior_.t, r.t);
    interior_.x = std::max(interior_.x, r.x);
    needed_.emplace(idx, Field{});
  }

  // Computes every required field and checks the common interior is nonempty.
  void build() {
    const GridSpec& g = field_.grid;
    if (g.n_t <= 2 * interior_.t || g.n_x <= 2 * interior_.x) {
      std::ostringstream os;
      os << "grid " << g.n_t << "x" << g.n_x << " is too small for order-" << n_ << " stencils (needs more than "
         << 2 * interior_.t << "x" << 2 * interior_.x << " points)";
      throw GridError(os.str());
    }
    for (auto& [idx, f] : needed_) f = derivative_field(field_, idx, n_);
    nt_ = g.n_t - 2 * interior_.t;
    nx_ = g.n_x - 2 * interior_.x;
  }

  // Value of derivative idx at interior point (ii, jj).
  double at(Index2 idx, std::size_t ii, std::size_t jj) const {
    const Field& f = needed_.at(idx);
    const std::size_t off_t = interior_.t + field_.trim.t - f.trim.t;
    const std::size_t off_x = interior_.x + field_.trim.x - f.trim.x;
    return f.values(static_cast<Eigen::Index>(ii + off_t), static_cast<Eigen::Index>(jj + off_x));
  }

  std::size_t n_t() const { return nt_; }
  std::size_t n_x() const { return nx_; }
  Trim absolute_trim() const { return {field_.trim.t + interior_.t, field_.trim.x + interior_.x}; }
  GridSpec interior_grid() const {
    GridSpec g = field_.grid;
    g.t0 = field_.grid.t(interior_.t);
    g.x0 = field_.grid.x(interior_.x);
    g.n_t = nt_;
    g.n_x = nx_;
    return g;
  }

private:
  const Field& field_;
  int n_;
  Trim interior_;
  std::map<Index2, Field> needed_;
  std::size_t nt_ = 0;
  std::size_t nx_ = 0;
};

std::array<Index2, 2> gradient_indices(const Feature& f) {
  const Index2 base = index_of(f);
  return {Index2{base.first + 1, base.second}, Index2{base.first, base.second + 1}};
}

void check_fd_order(int n) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("fd_order must be even and >= 2");
}

} // namespace

Feature Feature::derivative(int order_t, int order_x) {
  if (order_t < 0 || order_x < 0 || order_t + order_x == 0) {
    throw std::invalid_argument("derivative feature needs a positive total order");
  }
  return {Kind::Derivative, order_t, order_x};
}

Feature Feature::parse(std::string_view token) {
  if (token == "t") return coord_t();
  if (token == "x") return coord_x();
  if (token == "u") return value();
  if (token.size() > 2 && token.substr(0, 2) == "u_") {
    int ot = 0;
    int ox = 0;
    for (char ch : token.substr(2)) {
      if (ch == 't') ++ot;
      else if (ch == 'x') ++ox;
      else throw std::invalid_argument("unknown feature '" + std::string(token) + "'");
    }
    return derivative(ot, ox);
  }
  throw std::invalid_argument("unknown feature '" + std::string(token) +
                              "' (expected u, t, x, or u_ followed by t/x letters)");
}

std::string Feature::to_string() const {
  switch (kind) {
  case Kind::CoordT: return "t";
  case Kind::CoordX: return "x";
  case Kind::Value: return "u";
  case Kind::Derivative: break;
  }
  return "u_" + std::string(static_cast<std::size_t>(order_t), 't') + std::string(static_cast<std::size_t>(order_x), 'x');
}

void FeatureSpec::validate() const {
  if (features.empty()) throw std::invalid_argument("feature spec must not be empty");
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (features[i].total_order() > 2) {
      throw std::invalid_argument("feature " + features[i].to_string() + " exceeds total derivative order 2");
    }
    for (std::size_t j = i + 1; j < features.size(); ++j) {
      if (features[i] == features[j]) {
        throw std::invalid_argument("duplicate feature " + features[i].to_string());
      }
    }
  }
}

FeatureSpec FeatureSpec::parse(std::string_view text) {
  FeatureSpec spec;
  std::string token;
  auto flush = [&] {
    if (!token.empty()) spec.features.push_back(Feature::parse(token));
    token.clear();
  };
  for (char ch : text) {
    if (ch == ',' || ch == ' ' || ch == '\t' || ch == '[' || ch == ']' || ch == '"' || ch == '\'') {
      flush();
    } else {
      token.push_back(ch);
    }
  }
  flush();
  spec.validate();
  return spec;
}

std::string FeatureSpec::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (i) s += ", ";
    s += features[i].to_string();
  }
  return s + ")";
}

int max_stencil_order(const FeatureSpec& spec, bool jacobian) {
  int l = 0;
  for (const auto& f : spec.features) {
    if (f.is_coordinate()) continue;
    if (!jacobian) {
      l = std::max({l, f.order_t, f.order_x});
    } else {
      for (const auto& [ot, ox] : gradient_indices(f)) l = std::max({l, ot, ox});
    }
  }
  return l;
}

FeatureMatrix build_feature_matrix(const Field& field, const FeatureSpec& spec, int fd_order, double epsilon,
                                   const BoundConstants& c) {
  spec.validate();
  check_fd_order(fd_order);
  if (!(epsilon >= 0.0)) throw std::invalid_argument("epsilon must be >= 0");

  DerivativeTable table(field, fd_order);
  for (const auto& f : spec.features)
    if (!f.is_coordinate()) table.require(index_of(f));
  table.build();

  const std::size_t nt = table.n_t();
  const std::size_t nx = table.n_x();
  const std::size_t m = nt * nx;
  const std::size_t p = spec.size();
  if (m <= p) {
    throw GridError("feature matrix needs more rows than columns (" + std::to_string(m) + " <= " +
                    std::to_string(p) + ")");
  }

  FeatureMatrix gm;
  gm.values.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(p));
  gm.trim = table.absolute_trim();
  gm.interior = table.interior_grid();
  double sum_sq = 0.0;
  for (std::size_t col = 0; col < p; ++col) {
    const Feature& f = spec.features[col];
    const auto c_idx = static_cast<Eigen::Index>(col);
    for (std::size_t ii = 0; ii < nt; ++ii) {
      for (std::size_t jj = 0; jj < nx; ++jj) {
        const auto row = static_cast<Eigen::Index>(ii * nx + jj);
        switch (f.kind) {
        case Feature::Kind::CoordT: gm.values(row, c_idx) = gm.interior.t(ii); break;
        case Feature::Kind::CoordX: gm.values(row, c_idx) = gm.interior.x(jj); break;
        default: gm.values(row, c_idx) = table.at(index_of(f), ii, jj); break;
        }
      }
    }
    const double bound = f.is_coordinate() ? 0.0 : derivative_bound(field.grid, index_of(f), fd_order, epsilon, c);
    gm.column_bounds.push_back(bound);
    // ||u - u~||_2^2 <= m eps^2 for the value column, m e_fd^2 for derivatives
    sum_sq += static_cast<double>(m) * bound * bound;
  }
  gm.eps_G = std::sqrt(sum_sq);
  return gm;
}

JacobianStack build_jacobian_stack(const Field& field, const FeatureSpec& spec, int fd_order, double epsilon,
                                   const BoundConstants& c) {
  spec.validate();
  check_fd_order(fd_order);
  if (!(epsilon >= 0.0)) throw std::invalid_argument("epsilon must be >= 0");

  DerivativeTable table(field, fd_order);
  for (const auto& f : spec.features)
    if (!f.is_coordinate())
      for (const auto& idx : gradient_indices(f)) table.require(idx);
  table.build();

  const std::size_t p = spec.size();
  JacobianStack js;
  js.trim = table.absolute_trim();
  js.entry_bounds = Eigen::MatrixX2d::Zero(static_cast<Eigen::Index>(p), 2);
  double sum_sq = 0.0;
  for (std::size_t r = 0; r < p; ++r) {
    const Feature& f = spec.features[r];
    if (f.is_coordinate()) continue;
    const auto idx = gradient_indices(f);
    for (int col = 0; col < 2; ++col) {
      const double b = derivative_bound(field.grid, idx[static_cast<std::size_t>(col)], fd_order, epsilon, c);
      js.entry_bounds(static_cast<Eigen::Index>(r), col) = b;
      sum_sq += b * b;
    }
  }
  js.eps_JG = std::sqrt(sum_sq);

  const GridSpec interior = table.interior_grid();
  const std::size_t nt = table.n_t();
  const std::size_t nx = table.n_x();
  js.points.reserve(nt * nx);
  js.matrices.reserve(nt * nx);
  for (std::size_t ii = 0; ii < nt; ++ii) {
    for (std::size_t jj = 0; jj < nx; ++jj) {
      Eigen::MatrixX2d jm(static_cast<Eigen::Index>(p), 2);
      for (std::size_t r = 0; r < p; ++r) {
        const Feature& f = spec.features[r];
        const auto row = static_cast<Eigen::Index>(r);
        switch (f.kind) {
        case Feature::Kind::CoordT: jm.row(row) << 1.0, 0.0; break;
        case Feature::Kind::CoordX: jm.row(row) << 0.0, 1.0; break;
        default: {
          const auto idx = gradient_indices(f);
          jm(row, 0) = table.at(idx[0], ii, jj);
          jm(row, 1) = table.at(idx[1], ii, jj);
        }
        }
      }
      js.points.push_back({js.trim.t + ii, js.trim.x + jj, interior.t(ii), interior.x(jj)});
      js.matrices.push_back(std::move(jm));
    }
  }
  return js;
}

double effective_epsilon(double matrix_budget, MatrixKind kind) {
  if (!(matrix_budget >= 0.0)) {
    throw std::invalid_argument(std::string("effective_epsilon: negative ") + (kind == MatrixKind::G ? "eps_G" : "eps_JG") +
                                " budget");
  }
  return matrix_budget;
}

} // namespace pdeid
