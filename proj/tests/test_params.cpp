#include "thinfilm/params.hpp"

#include <doctest.h>

#include <cmath>

using namespace thinfilm;

namespace {

PhysicalParams water_like() {
  PhysicalParams p;
  p.mu = 1e-3;
  p.rhoL = 1000.0;
  p.sigma1e = 0.072;
  p.sigma2e = 0.04;
  p.sigma3e = 0.03;
  p.gamma1 = 2e4;
  p.gamma2 = 3e4;
  p.tau1 = 1e-9;
  p.tau2 = 2e-9;
  p.rhos1e = 4e-7;
  p.rhos2e = 6e-7;
  p.alpha1 = 0.5;
  p.beta1 = 2.0;
  p.alpha2 = 0.3;
  p.beta2 = 1.5;
  p.m = 1.2;
  p.sigma3bar = -0.4;
  p.L = 1e-3;
  p.H = 1e-4;
  return p;
}

bool rel_close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

} // namespace

TEST_CASE("d1 from unit viscosity and length") {
  PhysicalParams p = water_like();
  p.mu = 1.0;
  p.L = 1.0;
  p.H = 0.1;
  p.alpha1 = 0.0;
  p.beta1 = 2.5;
  CHECK(nondimensionalize(p).d1 == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("equal compressibilities give a = 1") {
  PhysicalParams p = water_like();
  p.gamma2 = p.gamma1;
  CHECK(nondimensionalize(p).a == 1.0);
}

TEST_CASE("hand-evaluated groups for a millimetre film") {
  const PhysicalParams p = water_like();
  const DimensionlessParams dp = nondimensionalize(p);
  // eps = 0.1, mu/L = 1
  CHECK(rel_close(dp.eps, 0.1, 1e-12));
  CHECK(rel_close(dp.d1, (1.0 + 4.0 * 0.5 * 2.0) / (4.0 * 0.1 * 2.0), 1e-12));
  CHECK(rel_close(dp.lambda1, 0.1 * 4e-7 * 2e4 * 1e-9 / 1e-6, 1e-12));
  CHECK(rel_close(dp.lambda2, 0.1 * 6e-7 * 2e4 * 2e-9 / 1e-6, 1e-12));
  CHECK(rel_close(dp.a, 1.5, 1e-12));
  CHECK(rel_close(dp.beta, 0.1 * 1.5 * 1e-3 / 1e-3, 1e-12));
  CHECK(rel_close(dp.d2, 0.3 * 1.5 / 0.1, 1e-12));
  CHECK(rel_close(dp.b, -(0.03 / 0.072) * -0.4, 1e-12));
  CHECK(rel_close(dp.g, 6e-7 * 2e-9 / (4e-7 * 1e-9), 1e-12));
  CHECK(rel_close(dp.q, 4e-7 / 6e-7, 1e-12));
  CHECK(rel_close(dp.c1, 1.0 - 2.0 * 0.15 * 6.25 * (2.0 / 3.0), 1e-12));
  CHECK(rel_close(dp.c2, 2.0 * 1.5 * (0.25 - 0.45), 1e-12));
  CHECK(rel_close(dp.b1, 1.5 * (0.25 + 0.45), 1e-12));
  CHECK(dp.m == 1.2);
}

TEST_CASE("derived coefficient examples") {
  DimensionlessParams dp;
  dp.beta = 1.0;
  dp.d1 = 1.0;
  dp.q = 0.5;
  dp.a = 1.0;
  dp.alpha2beta2 = 0.25;
  const DerivedCoefficients c = derived_coefficients(dp);
  CHECK(c.c1 == 0.0);
  CHECK(c.c2 == 0.0);
  CHECK(c.b1 == 0.5);
  CHECK(relaxation_density_ratio(1.0, 2.0, 6.0, 3.0) == 1.0);
}

TEST_CASE("derived coefficients are idempotent on nondimensionalized groups") {
  const DimensionlessParams dp = nondimensionalize(water_like());
  const DerivedCoefficients c = derived_coefficients(dp);
  CHECK(c.c1 == dp.c1);
  CHECK(c.c2 == dp.c2);
  CHECK(c.b1 == dp.b1);
  CHECK(c.g == dp.g);
  CHECK(c.q == dp.q);
}

TEST_CASE("beta*d1 does not depend on eps, L or mu") {
  PhysicalParams p = water_like();
  const DimensionlessParams first = nondimensionalize(p);
  p.mu = 0.37;
  p.L = 4e-3;
  p.H = 1e-5;
  const DimensionlessParams second = nondimensionalize(p);
  const double expected = p.beta2 * (1.0 + 4.0 * p.alpha1 * p.beta1) / (4.0 * p.beta1);
  CHECK(rel_close(first.beta * first.d1, expected, 1e-12));
  CHECK(rel_close(second.beta * second.d1, expected, 1e-12));
  CHECK(first.eps != second.eps);
}

TEST_CASE("zero denominators are rejected by name") {
  PhysicalParams p = water_like();
  p.beta1 = 0.0;
  CHECK_THROWS_WITH_AS(nondimensionalize(p), doctest::Contains("beta1"), ParameterError);
  p = water_like();
  p.tau2 = 0.0;
  CHECK_THROWS_WITH_AS(nondimensionalize(p), doctest::Contains("tau2"), ParameterError);
  p = water_like();
  p.gamma1 = 0.0;
  CHECK_THROWS_WITH_AS(nondimensionalize(p), doctest::Contains("gamma1"), ParameterError);
  p = water_like();
  p.H = 2.0 * p.L;
  CHECK_THROWS_AS(nondimensionalize(p), ParameterError);
}

TEST_CASE("regime checks") {
  PhysicalParams p = water_like();
  DimensionlessParams dp = nondimensionalize(p);
  const double t_macro = p.L * p.mu / std::pow(dp.eps, 3) / p.sigma1e;
  p.tau1 = 1e-3 * t_macro;
  p.tau2 = 1e-3 * t_macro;
  dp = nondimensionalize(p);
  const RegimeReport ok = validate_regime(p, dp);
  CHECK(ok.ok());

  dp.q = 1.5;
  const RegimeReport bad_q = validate_regime(dp);
  REQUIRE(bad_q.violations.size() == 1);
  CHECK(bad_q.violations[0].assumption == "q<1");
  CHECK(bad_q.violations[0].left == 1.5);

  dp.q = 0.5;
  dp.eps = 0.5;
  const RegimeReport wide = validate_regime(dp);
  CHECK(wide.ok());
  REQUIRE(wide.warnings.size() == 1);
  CHECK(wide.warnings[0].find("aspect ratio not small") != std::string::npos);

  p.tau1 = 0.5 * t_macro;
  const RegimeReport slow = validate_regime(p, nondimensionalize(p));
  REQUIRE(slow.violations.size() == 1);
  CHECK(slow.violations[0].assumption.rfind("tau1", 0) == 0);
}

TEST_CASE("groups given directly") {
  GroupInputs in;
  in.beta = 2.0;
  in.lambda1 = 0.1;
  in.lambda2 = 0.3;
  in.a = 0.5;
  in.d2 = 0.1;
  const DimensionlessParams dp = from_groups(in);
  CHECK(dp.g == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(dp.alpha2beta2 == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(dp.c2 == doctest::Approx(2.0 * 0.5 * (0.25 - 0.4)).epsilon(1e-15));

  in.lambda1 = 0.0;
  CHECK_THROWS_AS(from_groups(in), ParameterError);
  in.beta = 0.0;
  CHECK_THROWS_WITH_AS(from_groups(in), doctest::Contains("beta"), ParameterError);
}
