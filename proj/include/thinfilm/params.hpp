#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace thinfilm {

class ParameterError : public std::invalid_argument {
public:
  explicit ParameterError(const std::string &what) : std::invalid_argument(what) {}
};

/// Dimensional material and geometry constants (SI units).
struct PhysicalParams {
  double mu = 0.0;      ///< dynamic viscosity [Pa s]
  double rhoL = 0.0;    ///< liquid density [kg/m^3]
  double sigma1e = 0.0; ///< liquid-gas equilibrium tension [N/m]
  double sigma2e = 0.0; ///< liquid-solid equilibrium tension [N/m]
  double sigma3e = 0.0; ///< gas-solid equilibrium tension [N/m], signed
  double gamma1 = 0.0;  ///< compressibility of the liquid-gas interface
  double gamma2 = 0.0;  ///< compressibility of the liquid-solid interface
  double tau1 = 0.0;    ///< relaxation time, liquid-gas [s]
  double tau2 = 0.0;    ///< relaxation time, liquid-solid [s]
  double rhos1e = 0.0;  ///< equilibrium surface density, liquid-gas [kg/m^2]
  double rhos2e = 0.0;  ///< equilibrium surface density, liquid-solid [kg/m^2]
  double alpha1 = 0.0;
  double beta1 = 0.0;
  double alpha2 = 0.0;
  double beta2 = 0.0;
  double m = 0.0;         ///< chemical-potential slope ratio m1/m2
  double sigma3bar = 0.0; ///< deviation of the gas-solid tension, signed
  double L = 0.0;         ///< horizontal length scale [m]
  double H = 0.0;         ///< film thickness scale [m]
};

/// Dimensionless groups of the thin-film models plus the composite
/// coefficients that appear in the boundary conditions.
struct DimensionlessParams {
  double eps = 0.0;
  double beta = 1.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double a = 1.0;
  double d1 = 0.0;
  double d2 = 0.0;
  double b = 0.0;
  double m = 1.0;
  double g = 1.0;
  double q = 0.5;
  double alpha2beta2 = 0.0; ///< product alpha2*beta2 of the liquid-solid coefficients
  double c1 = 1.0;
  double c2 = 0.5;
  double b1 = 0.25;
};

struct DerivedCoefficients {
  double c1;
  double c2;
  double b1;
  double g;
  double q;
};

/// Group values a user may give directly. g and alpha2*beta2 follow from
/// g = lambda2/lambda1 and beta*d2 = a*alpha2*beta2.
struct GroupInputs {
  double eps = 0.0;
  double beta = 1.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double a = 1.0;
  double d1 = 0.0;
  double d2 = 0.0;
  double b = 0.0;
  double m = 1.0;
  double q = 0.5;
  double g = 1.0; ///< used only when lambda1 == 0
};

struct RegimeViolation {
  std::string assumption;
  double left;
  double right;
};

struct RegimeReport {
  std::vector<RegimeViolation> violations;
  std::vector<std::string> warnings;

  [[nodiscard]] bool ok() const { return violations.empty(); }
};

struct RegimeThresholds {
  double smallness = 0.1; ///< "a << b" is read as a < smallness * b
  double eps_max = 0.2;
};

void check_physical(const PhysicalParams &p);

DimensionlessParams nondimensionalize(const PhysicalParams &p);

DimensionlessParams from_groups(const GroupInputs &in);

DerivedCoefficients derived_coefficients(const DimensionlessParams &dp);

/// g = rho2e*tau2 / (rho1e*tau1).
double relaxation_density_ratio(double rhos1e, double rhos2e, double tau1, double tau2);

RegimeReport validate_regime(const PhysicalParams &p, const DimensionlessParams &dp,
                             const RegimeThresholds &thresholds = {});

/// Checks that only use the dimensionless groups (q < 1, eps bound).
RegimeReport validate_regime(const DimensionlessParams &dp, const RegimeThresholds &thresholds = {});

} // namespace thinfilm
