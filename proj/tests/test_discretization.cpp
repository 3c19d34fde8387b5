#include "thinfilm/grid.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>

using namespace thinfilm;

namespace {

std::vector<double> sample(const std::vector<double> &x, double (*f)(double)) {
  std::vector<double> v(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) v[j] = f(x[j]);
  return v;
}

double max_error_sin(std::size_t n, int order) {
  const ReferenceGrid grid(n);
  const DiffOps ops(grid);
  const DomainMap map{-1.0, 1.0};
  const auto x = map_to_physical(grid, map);
  const auto d = ops.apply(sample(x, [](double s) { return std::sin(s); }), order, map);
  double e = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    // d^k sin = sin(x + k pi/2)
    const double exact = std::sin(x[j] + order * std::acos(0.0));
    if (order == 4 && (j < 2 || j + 2 >= n)) continue; // fourth derivative is used at interior nodes only
    e = std::max(e, std::abs(d[j] - exact));
  }
  return e;
}

} // namespace

TEST_CASE("affine map examples") {
  const DomainMap sym{-1.0, 1.0};
  CHECK(sym.to_physical(0.5) == 0.0);

  const ReferenceGrid grid(11);
  const auto x = map_to_physical(grid, DomainMap{0.0, 2.0});
  for (std::size_t j = 0; j < x.size(); ++j) CHECK(x[j] == doctest::Approx(2.0 * j / 10.0).epsilon(1e-15));

  const DomainMap odd{-0.37, 1.91};
  const auto y = map_to_physical(ReferenceGrid(41), odd);
  CHECK(y.front() == odd.left);
  CHECK(y.back() == odd.right);
  for (std::size_t j = 1; j < y.size(); ++j) CHECK(y[j] > y[j - 1]);
  for (double v : y) CHECK(odd.to_physical(odd.to_reference(v)) == doctest::Approx(v).epsilon(1e-15));
}

TEST_CASE("degenerate domains and small grids are rejected") {
  const ReferenceGrid grid(21);
  CHECK_THROWS_AS(map_to_physical(grid, DomainMap{1.0, 1.0}), DomainError);
  CHECK_THROWS_AS(map_to_physical(grid, DomainMap{0.0, 0.05}, 0.1), DomainError);
  CHECK_THROWS_AS(ReferenceGrid(6), std::invalid_argument);
  CHECK_THROWS_AS(ReferenceGrid(20, true), std::invalid_argument);
  const DiffOps ops(grid);
  std::vector<double> f(21, 1.0);
  CHECK_THROWS((void)ops.apply(f, 0, DomainMap{}));
  CHECK_THROWS((void)ops.apply(f, 5, DomainMap{}));
}

TEST_CASE("domain velocity examples") {
  CHECK(domain_velocity(0.0, 0.0, 0.3) == 0.0);
  CHECK(domain_velocity(-1.0, 1.0, 0.5) == 0.0);
  CHECK(domain_velocity(0.0, 2.0, 0.25) == 0.5);
}

TEST_CASE("polynomial exactness on a mapped interval") {
  const ReferenceGrid grid(31);
  const DiffOps ops(grid);
  const DomainMap map{-0.8, 1.7};
  const auto x = map_to_physical(grid, map);
  const auto d1 = ops.apply(x, 1, map);
  for (double v : d1) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
  const auto d3 = ops.apply(sample(x, [](double s) { return s * s * s; }), 3, map);
  for (double v : d3) CHECK(v == doctest::Approx(6.0).epsilon(1e-9));
  const auto d2 = ops.apply(sample(x, [](double s) { return s * s; }), 2, map);
  for (double v : d2) CHECK(v == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("every operator annihilates constants") {
  const ReferenceGrid grid(41);
  const DiffOps ops(grid);
  for (int k = 1; k <= 4; ++k) {
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const Stencil &s = ops.row(k, j);
      const double sum = std::accumulate(s.w.begin(), s.w.end(), 0.0);
      const double scale = std::accumulate(s.w.begin(), s.w.end(), 0.0, [](double a, double w) { return a + std::abs(w); });
      CHECK(std::abs(sum) <= 1e-13 * scale);
    }
  }
}

TEST_CASE("second-order convergence on sin x") {
  for (int k = 1; k <= 4; ++k) {
    CAPTURE(k);
    const double ratio = max_error_sin(41, k) / max_error_sin(81, k);
    CHECK(std::log2(ratio) == doctest::Approx(2.0).epsilon(0.1));
  }
}

TEST_CASE("Fornberg weights reproduce the classical stencils") {
  const std::vector<double> pts{-1.0, 0.0, 1.0};
  const auto w = fd_weights(0.0, pts, 2);
  CHECK(w[0] == doctest::Approx(1.0));
  CHECK(w[1] == doctest::Approx(-2.0));
  CHECK(w[2] == doctest::Approx(1.0));
  const std::vector<double> f{1.0, 1.0, 1.0, 1.0};
  CHECK(trapezoid(f, 0.5) == doctest::Approx(1.5));
}
