#include "thinfilm/verification.hpp"

#include <doctest.h>

#include <cmath>

using namespace thinfilm;

namespace {

DimensionlessParams mms_params() {
  GroupInputs in;
  in.b = 0.02;
  in.lambda1 = 0.1;
  in.lambda2 = 0.1;
  in.beta = 1.0;
  in.a = 1.0;
  in.m = 1.0;
  in.d1 = 1.0;
  in.d2 = 0.1;
  in.q = 0.5;
  return from_groups(in);
}

double max_diff(const std::vector<double> &a, const std::vector<double> &b) {
  double e = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, std::abs(a[i] - b[i]));
  return e;
}

} // namespace

TEST_CASE("polynomial arithmetic") {
  const Poly p({1.0, -2.0, 3.0}); // 1 - 2x + 3x^2
  const Poly q({0.0, 1.0});
  CHECK(p(2.0) == 9.0);
  CHECK((p * q)(2.0) == 18.0);
  CHECK((p + q)(2.0) == 11.0);
  CHECK((p - q)(2.0) == 7.0);
  CHECK((2.0 * p)(2.0) == 18.0);
  CHECK(p.derivative()(2.0) == 10.0);
  CHECK(p.derivative(2)(5.0) == 6.0);
  CHECK(p.derivative(3)(5.0) == 0.0);
}

TEST_CASE("fitted order recovers a power law") {
  const std::vector<double> steps{0.1, 0.05, 0.025};
  std::vector<double> err;
  for (double h : steps) err.push_back(3.0 * h * h);
  CHECK(fitted_order(steps, err) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("manufactured catalogue") {
  const auto cat = manufactured_catalogue(0.02);
  REQUIRE(cat.size() == 3);
  CHECK(cat[0].name == "equilibrium");
  CHECK(cat[0].steady);
  for (const ManufacturedCase &c : cat) {
    CHECK(c.shape(-1.0) == doctest::Approx(0.0));
    CHECK(c.shape(1.0) == doctest::Approx(0.0));
  }
  CHECK(manufactured_case("quartic-slow", 0.02).name == "quartic-slow");
  CHECK_THROWS(manufactured_case("no-such-case", 0.02));
}

TEST_CASE("manufactured sources against finite differences of the exact fields") {
  const DimensionlessParams dp = mms_params();
  for (ModelVariant v : {ModelVariant::SmallSlip, ModelVariant::LargeSlip}) {
    const ManufacturedSolution ms(manufactured_case("quartic-oscillating", dp.b), dp, v);
    const Sources src = ms.sources();
    const bool small = v == ModelVariant::SmallSlip;
    const double t = 0.013, e = 1e-3;
    auto d = [&](auto f, double x, int k) {
      // central differences of orders 1 and 3 with step e
      if (k == 1) return (f(x + e) - f(x - e)) / (2 * e);
      return (f(x + 2 * e) - 2 * f(x + e) + 2 * f(x - e) - f(x - 2 * e)) / (2 * e * e * e);
    };
    auto h = [&](double x) { return ms.h(x, t); };
    auto z1 = [&](double x) { return ms.zeta1(x, t); };
    auto z2 = [&](double x) { return ms.zeta2(x, t); };
    auto flux = [&](double x) {
      const double hv = h(x), h3 = d(h, x, 3), z1x = d(z1, x, 1), z2x = d(z2, x, 1);
      if (small) return (hv / 3 + 1 / dp.beta) * hv * hv * h3 - 0.5 * z1x * hv * hv - (z1x + 0.5 * dp.a * z2x) * hv / dp.beta;
      return hv * hv * h3 - (z1x + 0.5 * dp.a * z2x) * hv;
    };
    for (double x : {-0.6, -0.1, 0.35, 0.8}) {
      const double et = 1e-5; // the amplitude oscillates with omega = 50
      const double ht = (ms.h(x, t + et) - ms.h(x, t - et)) / (2 * et);
      const double expected = ht + d(flux, x, 1);
      CHECK(src.h(x, t) == doctest::Approx(expected).epsilon(1e-4).scale(1.0));
    }
  }
}

TEST_CASE("manufactured state respects the contact conditions") {
  const DimensionlessParams dp = mms_params();
  const ManufacturedSolution ms(manufactured_case("quartic-slow", dp.b), dp, ModelVariant::SmallSlip);
  const FilmState s = ms.state(41, 0.0);
  CHECK(s.h.front() == 0.0);
  CHECK(s.h.back() == 0.0);
  CHECK(s.zeta2.front() == doctest::Approx(dp.m * s.zeta1.front()).epsilon(1e-14));
  // zeta1 + a zeta2 + h_x^2 / 2 = b with the exact slope
  const double e = 1e-6;
  const double slope = (ms.h(1.0, 0.0) - ms.h(1.0 - e, 0.0)) / e;
  CHECK(ms.zeta1(1.0, 0.0) + dp.a * ms.zeta2(1.0, 0.0) + 0.5 * slope * slope == doctest::Approx(dp.b).epsilon(1e-5));
}

TEST_CASE("steady manufactured member has round-off error") {
  const DimensionlessParams dp = mms_params();
  const ConvergenceReport r = mms_run(manufactured_case("equilibrium", dp.b), {41}, {1e-3}, dp);
  CHECK(r.steady_error <= 1e-12);
}

TEST_CASE("refinement study of the oscillating member") {
  const DimensionlessParams dp = mms_params();
  const ConvergenceReport r =
      mms_run(manufactured_case("quartic-oscillating", dp.b), {41, 81, 161}, {4e-4, 2e-4, 1e-4}, dp);
  CHECK(r.spatial_order >= 1.8);
  CHECK(r.spatial_order <= 2.2);
  CHECK(r.temporal_order >= 0.8);
  CHECK(r.temporal_order <= 1.2);
  for (std::size_t k = 1; k < r.spatial_errors.size(); ++k) CHECK(r.spatial_errors[k] < r.spatial_errors[k - 1]);
}

TEST_CASE("monolithic oracle") {
  const DimensionlessParams dp = mms_params();
  DropletSolver solver(41, dp, ModelVariant::SmallSlip, {});
  const FilmState eq = solver.project(equilibrium_state(41, dp.b, 0.4));
  const FilmState e1 = implicit_oracle_step(eq, 1e-3, dp, ModelVariant::SmallSlip);
  CHECK(max_diff(e1.h, eq.h) <= 1e-12);
  CHECK(std::abs(e1.lambda2 - eq.lambda2) <= 1e-12);

  const FilmState s0 = solver.project(parabola_state(41, 0.3, 1.0));
  const FilmState s1 = implicit_oracle_step(s0, 1e-4, dp, ModelVariant::SmallSlip);
  CHECK(std::abs(solver.total_mass(s1) - solver.total_mass(s0)) <= 1e-12);
  CHECK(s1.lambda2 > s0.lambda2);
  CHECK(s1.t == doctest::Approx(1e-4));

  DimensionlessParams relaxed = dp;
  relaxed.lambda1 = relaxed.lambda2 = 0.0;
  CHECK_THROWS((void)implicit_oracle_step(s0, 1e-4, relaxed, ModelVariant::SmallSlip));
}

TEST_CASE("classical reference") {
  const DimensionlessParams dp = mms_params();
  SolverConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 0.05;
  const FilmState eq = equilibrium_state(51, dp.b, 0.4);
  const ClassicalResult fixed = classical_reference(eq, cfg, dp);
  CHECK(max_diff(fixed.final_state.h, eq.h) <= 1e-10);
  CHECK(std::abs(fixed.final_state.lambda2 - eq.lambda2) <= 1e-10);

  const ClassicalResult spread = classical_reference(parabola_state(51, 0.5, 1.0), cfg, dp);
  const auto mass = spread.record.series("mass");
  for (double m : mass) CHECK(std::abs(m - mass.front()) <= 1e-6 * mass.front());
  const auto slope = spread.record.series("slope_right");
  for (std::size_t k = 1; k < slope.size(); ++k) CHECK(slope[k] == doctest::Approx(-std::sqrt(2 * dp.b)).epsilon(1e-9));
  CHECK(spread.final_state.lambda2 > 1.0);
}

TEST_CASE("droplet solver reduces to the classical model without relaxation") {
  DimensionlessParams dp = mms_params();
  dp.lambda1 = dp.lambda2 = 0.0;
  SolverConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 0.1;
  cfg.newton_tol = 1e-12;
  DropletSolver solver(61, dp, ModelVariant::SmallSlip, cfg);
  const FilmState h0 = parabola_state(61, 0.5, 1.0);
  const FilmState a = solver.run(h0).final_state;
  const FilmState b = classical_reference(h0, cfg, dp).final_state;
  CHECK(film_gap(a, b) <= 1e-9);
  CHECK(max_abs(a.zeta1) == 0.0);
}

TEST_CASE("film gap") {
  FilmState a = parabola_state(21, 0.5, 1.0);
  CHECK(film_gap(a, a) <= 1e-15);
  FilmState b = a;
  for (double &v : b.h) v *= 1.1;
  CHECK(film_gap(a, b) == doctest::Approx(0.05).epsilon(1e-12));
  FilmState c = parabola_state(21, 0.5, 1.0, 5.0);
  CHECK(film_gap(a, c) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("shooting oracle") {
  GroupInputs in;
  in.lambda1 = in.lambda2 = 0.7;
  in.beta = 1.3;
  in.a = 0.9;
  in.d2 = 0.2;
  const DimensionlessParams dp = from_groups(in);
  WedgeConfig c;
  c.k1 = 0.15;
  const std::vector<double> x{0.0, 0.2, 0.45, 0.8};
  const InnerSolution zero = shooting_oracle(0.8, 0.4, 0.0, 0.0, dp, c, x);
  CHECK(max_abs(zero.A) <= 1e-14);
  CHECK(max_abs(zero.zeta2) <= 1e-14);
  CHECK(inner_system_determinant(0.5, 0.4, dp, c.k1) != 0.0);

  // the problem is linear in the wedge speed: a central difference gives the unit-rate solution
  const double r = -0.6, e = 1e-3;
  const InnerSolution plus = shooting_oracle(0.8, 0.4, r + e, 0.01, dp, c, x);
  const InnerSolution minus = shooting_oracle(0.8, 0.4, r - e, 0.01, dp, c, x);
  const InnerSolution unit = InnerOperator(0.8, 0.4, dp, c.k1, 48).solve(1.0, 0.0);
  const InnerSolution unit_at = shooting_oracle(0.8, 0.4, 1.0, 0.0, dp, c, unit.x);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double sens = (plus.A[i] - minus.A[i]) / (2 * e);
    const double direct = shooting_oracle(0.8, 0.4, 1.0, 0.0, dp, c, x).A[i];
    CHECK(std::abs(sens - direct) <= 1e-4);
  }
  for (std::size_t i = 0; i < unit.x.size(); ++i) CHECK(std::abs(unit.A[i] - unit_at.A[i]) <= 1e-8);
  CHECK_THROWS_AS((void)shooting_oracle(0.0, 0.4, 1.0, 0.0, dp, c, x), DomainError);
}

TEST_CASE("random physical parameters are admissible") {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 20; ++k) {
    const PhysicalParams p = random_physical(rng);
    CHECK_NOTHROW(check_physical(p));
    const DimensionlessParams dp = nondimensionalize(p);
    CHECK(std::isfinite(dp.c1));
    CHECK(dp.eps < 1.0);
  }
  std::mt19937_64 a(11), b(11);
  CHECK(random_physical(a).mu == random_physical(b).mu);
}
