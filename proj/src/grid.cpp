#include "thinfilm/grid.hpp"

#include <cmath>
#include <sstream>

namespace thinfilm {

ReferenceGrid::ReferenceGrid(std::size_t n, bool symmetric) : xi_(n), dxi_(0.0) {
  if (n < 7) {
    std::ostringstream os;
    os << "reference grid needs at least 7 nodes (got " << n << ")";
    throw std::invalid_argument(os.str());
  }
  if (symmetric && n % 2 == 0) {
    std::ostringstream os;
    os << "symmetric mode needs an odd node count so that xi=1/2 is a node (got " << n << ")";
    throw std::invalid_argument(os.str());
  }
  dxi_ = 1.0 / static_cast<double>(n - 1);
  for (std::size_t j = 0; j < n; ++j) xi_[j] = static_cast<double>(j) * dxi_;
  xi_.back() = 1.0;
}

std::vector<double> map_to_physical(const ReferenceGrid &grid, const DomainMap &map, double min_width) {
  if (!(map.width() > min_width) || !(map.width() > 0.0)) {
    std::ostringstream os;
    os << "degenerate domain: width " << map.width() << " (left=" << map.left << ", right=" << map.right
       << ") is not above the minimum " << min_width;
    throw DomainError(os.str());
  }
  std::vector<double> x(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) x[j] = map.to_physical(grid.xi(j));
  x.front() = map.left;
  x.back() = map.right;
  return x;
}

double domain_velocity(double rate_left, double rate_right, double xi) {
  return rate_left * (1.0 - xi) + rate_right * xi;
}

// Fornberg, "Generation of finite difference formulas on arbitrarily spaced grids" (1988).
std::vector<double> fd_weights(double z, std::span<const double> x, int k) {
  const int n = static_cast<int>(x.size());
  if (k < 0 || k >= n) throw std::invalid_argument("fd_weights: derivative order must be below the point count");
  std::vector<std::vector<double>> c(n, std::vector<double>(k + 1, 0.0));
  double c1 = 1.0;
  double c4 = x[0] - z;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, k);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int s = mn; s >= 1; --s) c[i][s] = c1 * (s * c[i - 1][s - 1] - c5 * c[i - 1][s]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int s = mn; s >= 1; --s) c[j][s] = (c4 * c[j][s] - s * c[j][s - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = c[i][k];
  return w;
}

DiffOps::DiffOps(const ReferenceGrid &grid) : grid_(grid) {
  const std::size_t n = grid.size();
  for (int k = 1; k <= 4; ++k) {
    const std::size_t half = (k <= 2) ? 1 : 2;
    const std::size_t width = static_cast<std::size_t>(k) + 2;
    auto &rows = rows_[k - 1];
    rows.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      std::size_t start = 0;
      std::size_t count = 0;
      if (j >= half && j + half < n) {
        start = j - half;
        count = 2 * half + 1;
      } else {
        count = width;
        start = (j < half) ? 0 : n - width;
      }
      std::vector<double> offsets(count);
      for (std::size_t i = 0; i < count; ++i)
        offsets[i] = static_cast<double>(start + i) - static_cast<double>(j);
      rows[j] = Stencil{start, fd_weights(0.0, offsets, k)};
    }
  }
}

const Stencil &DiffOps::row(int order, std::size_t j) const {
  if (order < 1 || order > 4) {
    std::ostringstream os;
    os << "derivative order must be in 1..4 (got " << order << ")";
    throw std::invalid_argument(os.str());
  }
  return rows_[order - 1][j];
}

double DiffOps::at(std::span<const double> f, int order, std::size_t j, double width) const {
  const Stencil &s = row(order, j);
  double acc = 0.0;
  for (std::size_t i = 0; i < s.w.size(); ++i) acc += s.w[i] * f[s.start + i];
  const double dx = width * grid_.dxi();
  return acc / std::pow(dx, order);
}

std::vector<double> DiffOps::apply(std::span<const double> f, int order, const DomainMap &map) const {
  if (f.size() != grid_.size()) throw std::invalid_argument("DiffOps::apply: field length does not match the grid");
  (void)row(order, 0);
  std::vector<double> out(f.size());
  for (std::size_t j = 0; j < f.size(); ++j) out[j] = at(f, order, j, map.width());
  return out;
}

std::vector<double> derivative(const DiffOps &ops, std::span<const double> f, int order, const DomainMap &map) {
  return ops.apply(f, order, map);
}

double trapezoid(std::span<const double> f, double dx) {
  if (f.size() < 2) return 0.0;
  double s = 0.5 * (f.front() + f.back());
  for (std::size_t j = 1; j + 1 < f.size(); ++j) s += f[j];
  return s * dx;
}

} // namespace thinfilm
