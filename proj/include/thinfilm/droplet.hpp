#pragma once

#include "thinfilm/banded.hpp"
#include "thinfilm/grid.hpp"
#include "thinfilm/params.hpp"
#include "thinfilm/record.hpp"

#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace thinfilm {

enum class ModelVariant { SmallSlip, LargeSlip };

std::string to_string(ModelVariant v);

/// Film profile and interface densities on the moving interval [lambda1, lambda2].
struct FilmState {
  std::vector<double> h;
  std::vector<double> zeta1;
  std::vector<double> zeta2;
  double lambda1 = -1.0;
  double lambda2 = 1.0;
  double t = 0.0;

  [[nodiscard]] DomainMap map() const { return {lambda1, lambda2}; }
  [[nodiscard]] std::size_t size() const { return h.size(); }
};

struct SolverConfig {
  double dt = 1e-4;
  double t_end = 1.0;
  double newton_tol = 1e-10;
  int newton_max_iter = 30;
  double theta = 1.0;          ///< implicitness of the fourth-order term
  bool symmetric_mode = false; ///< contact rates forced to (-s, s)
  double h_min = 0.0;          ///< optional thickness floor, off when zero
  double negative_tol = 1e-9;  ///< h below -negative_tol aborts the run
  bool freeze_contact = false; ///< fixed domain (manufactured-solution runs)
  std::size_t record_stride = 1;
  bool record_wall_time = false;
  /// Stop early once the steady residual falls below this value (0 disables).
  double steady_tol = 0.0;
};

class SolverError : public std::runtime_error {
public:
  SolverError(const std::string &what, std::vector<double> history = {})
      : std::runtime_error(what), history_(std::move(history)) {}
  [[nodiscard]] const std::vector<double> &residual_history() const { return history_; }

private:
  std::vector<double> history_;
};

struct ZetaFields {
  std::vector<double> zeta1;
  std::vector<double> zeta2;
};

struct ContactRates {
  double left = 0.0;
  double right = 0.0;
};

struct SteadyResidual {
  double pde = 0.0; ///< max |dQ/dx| over interior control volumes
  double bc = 0.0;  ///< max of the six contact-line residuals
};

/// Manufactured source terms f(x, t) added to the three field equations.
struct Sources {
  std::function<double(double, double)> h;
  std::function<double(double, double)> zeta1;
  std::function<double(double, double)> zeta2;
};

struct RunResult {
  RunRecord record;
  std::vector<FilmState> snapshots;
  FilmState final_state;
};

/// Semi-implicit solver for the droplet thin-film system on a moving domain.
///
/// The film equation is advanced in conservative ALE form on control volumes
/// around interior nodes; the flux through the two outermost faces is zero,
/// so the trapezoid mass is conserved to round-off. The fourth-order term
/// uses a mobility frozen at the old state, the interface-density terms are
/// explicit, and the contact points move by explicit Euler with the contact
/// velocity law. The surface densities are quasi-static: they are recomputed
/// from each new profile by a banded linear solve.
///
/// With lambda1 == 0 the densities vanish identically and the contact slope
/// is pinned at sqrt(2b); the contact points then follow from that
/// constraint by a Newton solve (the relaxation limit of the model).
class DropletSolver {
public:
  DropletSolver(std::size_t n, DimensionlessParams dp, ModelVariant variant, SolverConfig config);

  [[nodiscard]] const ReferenceGrid &grid() const { return ops_.grid(); }
  [[nodiscard]] const DiffOps &ops() const { return ops_; }
  [[nodiscard]] const DimensionlessParams &params() const { return dp_; }
  [[nodiscard]] ModelVariant variant() const { return variant_; }
  [[nodiscard]] const SolverConfig &config() const { return config_; }
  SolverConfig &config() { return config_; }
  void set_sources(std::optional<Sources> s) { sources_ = std::move(s); }

  [[nodiscard]] bool relaxation_limit() const { return dp_.lambda1 == 0.0; }

  /// Interface densities for a given profile; t is only used by manufactured sources.
  [[nodiscard]] ZetaFields solve_zeta(std::span<const double> h, const DomainMap &map, double t = 0.0) const;

  /// Depth-integrated flux Q at the nodes.
  [[nodiscard]] std::vector<double> flux(const FilmState &s) const;

  /// Contact-line value of h*h_xxx given by the first contact-line condition.
  [[nodiscard]] double contact_closure(const FilmState &s, bool right) const;

  [[nodiscard]] ContactRates contact_velocity(const FilmState &s) const;

  /// Recompute the densities from h (consistent initialization).
  [[nodiscard]] FilmState project(FilmState s) const;

  FilmState step(const FilmState &s);

  RunResult run(const FilmState &initial, std::span<const double> snapshot_times = {});

  [[nodiscard]] double total_mass(const FilmState &s) const;
  [[nodiscard]] SteadyResidual steady_residual(const FilmState &s) const;
  [[nodiscard]] int last_newton_iterations() const { return last_iterations_; }

  /// Largest time-step-independent diagnostics recorded per sample.
  [[nodiscard]] std::vector<std::string> record_columns() const;

  void check_state(const FilmState &s) const;
  void set_min_width(double w) { min_width_ = w; }

private:
  struct Coefficients {
    double cz1, cz2;          // prefactors of the two density equations
    double k22;               // coefficient of d(zeta2)/dx in the zeta2 flux
    double closure1, closure2; // h h_xxx = closure1*zeta1_x + closure2*zeta2_x at contact
    double velocity_scale;    // contact velocity prefactor
  };

  [[nodiscard]] Coefficients coefficients() const;
  [[nodiscard]] double mobility(double h) const;
  [[nodiscard]] double zeta_flux_term(double h, double z1x, double z2x) const;
  FilmState step_semi_implicit(const FilmState &s);
  FilmState step_relaxation_limit(const FilmState &s);
  void append_sample(RunRecord &rec, const FilmState &s, double wall) const;

  DiffOps ops_;
  DimensionlessParams dp_;
  ModelVariant variant_;
  SolverConfig config_;
  std::optional<Sources> sources_;
  double min_width_ = 0.0;
  int last_iterations_ = 0;
};

/// Initial droplet h = amplitude*(1 - ((x-center)/half_width)^2) on [center-half_width, center+half_width].
FilmState parabola_state(std::size_t n, double amplitude, double half_width, double center = 0.0);

/// Equilibrium cap with contact slope sqrt(2b) and the given mass.
FilmState equilibrium_state(std::size_t n, double b, double mass, double center = 0.0);

} // namespace thinfilm
