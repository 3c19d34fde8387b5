#include "thinfilm/params.hpp"

#include <cmath>
#include <sstream>

namespace thinfilm {

namespace {

void require_positive(double v, const char *name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    std::ostringstream os;
    os << "parameter '" << name << "' must be strictly positive (got " << v << ")";
    throw ParameterError(os.str());
  }
}

void require_non_negative(double v, const char *name) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    std::ostringstream os;
    os << "parameter '" << name << "' must be non-negative (got " << v << ")";
    throw ParameterError(os.str());
  }
}

void fill_derived(DimensionlessParams &dp) {
  const DerivedCoefficients c = derived_coefficients(dp);
  dp.c1 = c.c1;
  dp.c2 = c.c2;
  dp.b1 = c.b1;
}

} // namespace

void check_physical(const PhysicalParams &p) {
  require_positive(p.mu, "mu");
  require_positive(p.L, "L");
  require_positive(p.H, "H");
  require_positive(p.sigma1e, "sigma1e");
  require_positive(p.gamma1, "gamma1");
  require_positive(p.beta1, "beta1");
  require_positive(p.tau1, "tau1");
  require_positive(p.tau2, "tau2");
  require_positive(p.rhos1e, "rhos1e");
  require_positive(p.rhos2e, "rhos2e");
  require_non_negative(p.rhoL, "rhoL");
  require_non_negative(p.sigma2e, "sigma2e");
  require_non_negative(p.gamma2, "gamma2");
  require_non_negative(p.alpha1, "alpha1");
  require_non_negative(p.alpha2, "alpha2");
  require_non_negative(p.beta2, "beta2");
  require_non_negative(p.m, "m");
  if (!std::isfinite(p.sigma3e)) throw ParameterError("parameter 'sigma3e' must be finite");
  if (!std::isfinite(p.sigma3bar)) throw ParameterError("parameter 'sigma3bar' must be finite");
  if (!(p.H < p.L)) {
    std::ostringstream os;
    os << "parameter 'H' must be smaller than 'L' (H=" << p.H << ", L=" << p.L << ")";
    throw ParameterError(os.str());
  }
}

DimensionlessParams nondimensionalize(const PhysicalParams &p) {
  check_physical(p);
  DimensionlessParams dp;
  const double eps = p.H / p.L;
  dp.eps = eps;
  dp.d1 = (p.mu / p.L) * (1.0 + 4.0 * p.alpha1 * p.beta1) / (4.0 * eps * p.beta1);
  dp.lambda1 = eps * p.rhos1e * p.gamma1 * p.tau1 / (p.L * p.mu);
  dp.lambda2 = eps * p.rhos2e * p.gamma1 * p.tau2 / (p.L * p.mu);
  dp.a = p.gamma2 / p.gamma1;
  dp.beta = eps * p.beta2 * p.L / p.mu;
  dp.d2 = p.alpha2 * (p.gamma2 / (eps * p.gamma1)) * (p.mu / p.L);
  dp.b = -(p.sigma3e / p.sigma1e) * p.sigma3bar;
  dp.m = p.m;
  dp.g = relaxation_density_ratio(p.rhos1e, p.rhos2e, p.tau1, p.tau2);
  dp.q = p.rhos1e / p.rhos2e;
  dp.alpha2beta2 = p.alpha2 * p.beta2;
  fill_derived(dp);
  return dp;
}

DimensionlessParams from_groups(const GroupInputs &in) {
  require_positive(in.beta, "beta");
  require_non_negative(in.eps, "eps");
  require_non_negative(in.lambda1, "lambda1");
  require_non_negative(in.lambda2, "lambda2");
  require_non_negative(in.a, "a");
  require_non_negative(in.d1, "d1");
  require_non_negative(in.d2, "d2");
  require_non_negative(in.m, "m");
  require_non_negative(in.q, "q");
  require_non_negative(in.g, "g");
  if (!std::isfinite(in.b)) throw ParameterError("parameter 'b' must be finite");

  DimensionlessParams dp;
  dp.eps = in.eps;
  dp.beta = in.beta;
  dp.lambda1 = in.lambda1;
  dp.lambda2 = in.lambda2;
  dp.a = in.a;
  dp.d1 = in.d1;
  dp.d2 = in.d2;
  dp.b = in.b;
  dp.m = in.m;
  dp.q = in.q;
  if (in.lambda1 > 0.0) {
    dp.g = in.lambda2 / in.lambda1;
  } else {
    if (in.lambda2 > 0.0)
      throw ParameterError("parameter 'lambda2' must vanish when 'lambda1' is zero (lambda2 = g*lambda1)");
    dp.g = in.g;
  }
  if (in.a > 0.0) {
    dp.alpha2beta2 = in.beta * in.d2 / in.a;
  } else if (in.d2 > 0.0) {
    throw ParameterError("parameter 'd2' must vanish when 'a' is zero (beta*d2 = a*alpha2*beta2)");
  }
  fill_derived(dp);
  return dp;
}

DerivedCoefficients derived_coefficients(const DimensionlessParams &dp) {
  DerivedCoefficients c{};
  c.c1 = 1.0 - 2.0 * dp.beta * dp.d1 * dp.q;
  c.c2 = 2.0 * dp.a * (0.25 - dp.alpha2beta2);
  c.b1 = dp.a * (0.25 + dp.alpha2beta2);
  c.g = dp.g;
  c.q = dp.q;
  return c;
}

double relaxation_density_ratio(double rhos1e, double rhos2e, double tau1, double tau2) {
  require_positive(rhos1e, "rhos1e");
  require_positive(tau1, "tau1");
  return rhos2e * tau2 / (rhos1e * tau1);
}

RegimeReport validate_regime(const DimensionlessParams &dp, const RegimeThresholds &thresholds) {
  RegimeReport r;
  if (!(dp.q < 1.0)) r.violations.push_back({"q<1", dp.q, 1.0});
  if (dp.eps > thresholds.eps_max) {
    std::ostringstream os;
    os << "aspect ratio not small: eps=" << dp.eps << " exceeds " << thresholds.eps_max;
    r.warnings.push_back(os.str());
  }
  return r;
}

RegimeReport validate_regime(const PhysicalParams &p, const DimensionlessParams &dp,
                             const RegimeThresholds &thresholds) {
  RegimeReport r;
  const double eps = p.H / p.L;
  const double t_macro = p.L * p.mu / (eps * eps * eps * p.sigma1e);
  const double f = thresholds.smallness;
  if (!(p.tau1 < f * t_macro)) r.violations.push_back({"tau1<<L*mu/(eps^3*sigma1e)", p.tau1, t_macro});
  if (!(p.tau2 < f * t_macro)) r.violations.push_back({"tau2<<L*mu/(eps^3*sigma1e)", p.tau2, t_macro});
  const double drho = eps * eps * p.sigma1e / p.gamma1;
  if (!(drho < f * p.rhos1e)) r.violations.push_back({"eps^2*sigma1e/gamma1<<rhos1e", drho, p.rhos1e});
  if (!(drho < f * p.rhos2e)) r.violations.push_back({"eps^2*sigma1e/gamma1<<rhos2e", drho, p.rhos2e});
  RegimeReport groups = validate_regime(dp, thresholds);
  r.violations.insert(r.violations.end(), groups.violations.begin(), groups.violations.end());
  r.warnings.insert(r.warnings.end(), groups.warnings.begin(), groups.warnings.end());
  return r;
}

} // namespace thinfilm
