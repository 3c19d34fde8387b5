#pragma once

#include "thinfilm/droplet.hpp"
#include "thinfilm/wedge.hpp"

#include <random>
#include <string>
#include <vector>

namespace thinfilm {

// ---------------------------------------------------------------------------
// Manufactured solutions on the fixed interval [-1, 1].

/// Polynomial in x with ascending coefficients.
class Poly {
public:
  Poly() = default;
  explicit Poly(std::vector<double> c) : c_(std::move(c)) {}
  [[nodiscard]] double operator()(double x) const;
  [[nodiscard]] Poly derivative(int k = 1) const;
  [[nodiscard]] const std::vector<double> &coefficients() const { return c_; }
  friend Poly operator+(const Poly &a, const Poly &b);
  friend Poly operator-(const Poly &a, const Poly &b);
  friend Poly operator*(const Poly &a, const Poly &b);
  friend Poly operator*(double s, const Poly &a);

private:
  std::vector<double> c_;
};

struct ManufacturedCase {
  std::string name;
  Poly shape;            ///< h*(x, t) = amplitude(t) * shape(x); shape(+-1) = 0
  double base = 1.0;     ///< amplitude(t) = base + swing * sin(omega t)
  double swing = 0.0;
  double omega = 0.0;
  double zeta1_bump = 0.0; ///< interior zeta1* component e1(t) (1-x^2)^2
  double zeta2_bump = 0.0;
  bool steady = false;     ///< exact discrete steady state, zero sources
};

/// Fixed catalogue: "equilibrium" (steady parabola), "quartic-slow", "quartic-oscillating".
std::vector<ManufacturedCase> manufactured_catalogue(double b);
ManufacturedCase manufactured_case(const std::string &name, double b);

/// Exact fields and sources of a case for given parameters and slip variant.
class ManufacturedSolution {
public:
  ManufacturedSolution(ManufacturedCase c, DimensionlessParams dp, ModelVariant variant);

  [[nodiscard]] double h(double x, double t) const;
  [[nodiscard]] double zeta1(double x, double t) const;
  [[nodiscard]] double zeta2(double x, double t) const;
  [[nodiscard]] Sources sources() const;
  [[nodiscard]] FilmState state(std::size_t n, double t) const;

private:
  struct Fields {
    double t;
    Poly h, ht, z1, z2;
    Poly sh, sz1, sz2;
  };
  [[nodiscard]] const Fields &at(double t) const;

  ManufacturedCase case_;
  DimensionlessParams dp_;
  ModelVariant variant_;
  mutable Fields cache_;
  mutable bool cached_ = false;
};

struct ConvergenceReport {
  std::string case_name;
  std::vector<std::size_t> n_list;
  std::vector<double> spatial_errors;
  double spatial_order = 0.0;
  std::vector<double> dt_list;
  std::vector<double> temporal_errors;
  double temporal_order = 0.0;
  double steady_error = 0.0; ///< used by steady catalogue members
};

/// Least-squares slope of log(error) against log(1/step).
double fitted_order(const std::vector<double> &steps, const std::vector<double> &errors);

struct MmsOptions {
  double t_end_spatial = 0.01;
  double dt_spatial = 1e-5;
  double t_end_temporal = 0.02;
  std::size_t n_temporal = 81;
  int reference_refinement = 16; ///< temporal reference uses dt_min / this
};

/// Spatial errors are measured against the exact solution at t_end (dt small);
/// temporal errors against a fine-step reference on the same grid.
ConvergenceReport mms_run(const ManufacturedCase &c, const std::vector<std::size_t> &n_list,
                          const std::vector<double> &dt_list, const DimensionlessParams &dp,
                          ModelVariant variant = ModelVariant::SmallSlip, const MmsOptions &opt = {});

// ---------------------------------------------------------------------------
// Fully coupled backward-Euler oracle.

struct OracleOptions {
  double tol = 1e-12;
  int max_iter = 40;
};

/// One backward-Euler step of the complete system (h, zeta1, zeta2, lambda1, lambda2)
/// with a dense Newton solve; same spatial discretization as the production stepper.
FilmState implicit_oracle_step(const FilmState &s, double dt, const DimensionlessParams &dp, ModelVariant variant,
                               const OracleOptions &opt = {});

// ---------------------------------------------------------------------------
// Classical slip model with the contact slope held at sqrt(2b).

struct ClassicalResult {
  RunRecord record;
  FilmState final_state;
};

ClassicalResult classical_reference(const FilmState &initial, const SolverConfig &config,
                                    const DimensionlessParams &dp, ModelVariant variant = ModelVariant::SmallSlip);

// ---------------------------------------------------------------------------
// Shooting oracle for the inner wedge problem.

/// Integrates from the symmetry point with zeta2(0) as shooting parameter and
/// returns the fields at the requested abscissae (ascending, within [0, lambda]).
InnerSolution shooting_oracle(double lambda, double h_tilde, double h_tilde_rate, double zeta2_end,
                              const DimensionlessParams &dp, const WedgeConfig &c,
                              const std::vector<double> &x_out);

/// Largest |h_a(x) - h_b(x)| over both node sets, with linear interpolation and h = 0 off the film.
double film_gap(const FilmState &a, const FilmState &b);

/// Random admissible physical parameter set (log-uniform magnitudes, SI units).
PhysicalParams random_physical(std::mt19937_64 &rng);

/// Determinant of the first-order form of the inner system; shooting needs it away from zero.
double inner_system_determinant(double x, double h_tilde, const DimensionlessParams &dp, double k1);

} // namespace thinfilm
