#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace thinfilm {

class DomainError : public std::runtime_error {
public:
  explicit DomainError(const std::string &what) : std::runtime_error(what) {}
};

/// Uniform nodes xi_j = j/(n-1) on [0, 1].
class ReferenceGrid {
public:
  explicit ReferenceGrid(std::size_t n, bool symmetric = false);

  [[nodiscard]] std::size_t size() const { return xi_.size(); }
  [[nodiscard]] double dxi() const { return dxi_; }
  [[nodiscard]] double xi(std::size_t j) const { return xi_[j]; }
  [[nodiscard]] std::span<const double> nodes() const { return xi_; }
  /// Midpoint of cell [xi_j, xi_{j+1}].
  [[nodiscard]] double face(std::size_t j) const { return (static_cast<double>(j) + 0.5) * dxi_; }

private:
  std::vector<double> xi_;
  double dxi_;
};

/// Affine map of [0, 1] onto the physical interval [left, right].
struct DomainMap {
  double left = -1.0;
  double right = 1.0;

  [[nodiscard]] double width() const { return right - left; }
  [[nodiscard]] double to_physical(double xi) const { return left + xi * (right - left); }
  [[nodiscard]] double to_reference(double x) const { return (x - left) / (right - left); }
};

/// Node abscissae x_j; throws DomainError when the interval is narrower than min_width.
std::vector<double> map_to_physical(const ReferenceGrid &grid, const DomainMap &map, double min_width = 0.0);

/// Grid-node velocity of the moving map: xdot(xi) = rate_left*(1-xi) + rate_right*xi.
double domain_velocity(double rate_left, double rate_right, double xi);

/// Finite-difference weights for the k-th derivative at z from sample points x (Fornberg).
std::vector<double> fd_weights(double z, std::span<const double> x, int k);

/// One stencil row: f^(k)(xi_j) ~ sum_i w_i f_{start+i} / dxi^k.
struct Stencil {
  std::size_t start = 0;
  std::vector<double> w;
};

/// Derivative operators of order 1..4 on a reference grid. Interior rows are centered
/// second-order stencils; rows near the ends are one-sided of the same order.
class DiffOps {
public:
  explicit DiffOps(const ReferenceGrid &grid);

  [[nodiscard]] const ReferenceGrid &grid() const { return grid_; }
  [[nodiscard]] const Stencil &row(int order, std::size_t j) const;

  /// d^k f / dx^k at node j on the mapped interval.
  [[nodiscard]] double at(std::span<const double> f, int order, std::size_t j, double width) const;

  /// d^k f / dx^k at all nodes.
  [[nodiscard]] std::vector<double> apply(std::span<const double> f, int order, const DomainMap &map) const;

private:
  ReferenceGrid grid_;
  std::array<std::vector<Stencil>, 4> rows_;
};

std::vector<double> derivative(const DiffOps &ops, std::span<const double> f, int order, const DomainMap &map);

/// Composite trapezoid rule of node values over the mapped interval.
double trapezoid(std::span<const double> f, double dx);

} // namespace thinfilm
