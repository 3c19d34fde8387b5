#pragma once

#include "thinfilm/banded.hpp"
#include "thinfilm/grid.hpp"
#include "thinfilm/params.hpp"
#include "thinfilm/record.hpp"

#include <memory>
#include <vector>

namespace thinfilm {

struct WedgeConfig {
  double k1 = 0.1;          ///< rescaled wedge half-angle
  double k2 = 0.3;          ///< rescaled contact angle of the classical baseline
  double t0 = 1.0;          ///< wedge time scale
  double eta = 1.0;         ///< motion exponent
  double x_inf = 20.0;      ///< truncation of the outer film
  double A_classical = 0.0; ///< prescribed h h_xxx at the contact in the baseline
  double h_tilde_min = 0.05;
  std::size_t n = 201;      ///< outer grid nodes
  std::size_t n_inner = 48; ///< Chebyshev intervals of the inner collocation
  double dt = 1e-3;
  double t_end = 0.5;
  double newton_tol = 1e-10;
  int newton_max_iter = 30;
  std::size_t record_stride = 1;
  bool record_wall_time = false;
};

void validate(const WedgeConfig &c);

struct InnerSolution {
  std::vector<double> x; ///< collocation nodes from the symmetry point outwards
  std::vector<double> A;
  std::vector<double> zeta2;
};

struct WedgeState {
  std::vector<double> h; ///< outer profile on [lambda, x_inf]
  std::vector<double> zeta1;
  std::vector<double> zeta2;
  InnerSolution inner;
  double lambda = 0.0;
  double lambda_rate = 0.0; ///< contact speed over the last step
  double t = 0.0;
};

struct WedgePosition {
  double h_tilde;
  double rate;
};

WedgePosition wedge_position(double t, const WedgeConfig &c);

/// Gap G = h_tilde + k1|x| and the inner ODE coefficients r1 = G(1/beta + G/6), r2 = r1'.
struct InnerCoefficients {
  double G, r1, r2;
};
InnerCoefficients inner_coefficients(double x, double h_tilde, double k1, double beta);

/// Factorized collocation operator of the inner problem on the interval from the
/// symmetry point to `end` (end < 0 solves the mirrored problem). The problem is
/// linear in the forcing rate and the Dirichlet value of zeta2 at the contact.
class InnerOperator {
public:
  InnerOperator(double end, double h_tilde, const DimensionlessParams &dp, double k1, std::size_t n_intervals);
  ~InnerOperator();
  InnerOperator(InnerOperator &&) noexcept;
  InnerOperator &operator=(InnerOperator &&) noexcept;

  [[nodiscard]] InnerSolution solve(double h_tilde_rate, double zeta2_end) const;
  [[nodiscard]] double end() const { return end_; }
  [[nodiscard]] double h_tilde() const { return h_tilde_; }

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  double end_;
  double h_tilde_;
};

InnerSolution inner_solve(double lambda, double h_tilde, double h_tilde_rate, double zeta2_end,
                          const DimensionlessParams &dp, const WedgeConfig &c);

/// A_in(lambda) - (h h_xxx - zeta1_x) at the contact, with one-sided outer stencils.
double matching_residual(const WedgeState &s, const WedgeConfig &c);

/// First contact-line condition -h h_xxx/2 + c1 zeta1_x + c2 zeta2_x at the contact.
double contact_bc1_residual(const WedgeState &s, const DimensionlessParams &dp, const WedgeConfig &c);

/// theta = k1 - h_x at the contact.
double contact_angle(const WedgeState &s, const WedgeConfig &c);

/// Film at rest at first contact: h = 1, lambda = 0, densities from the elliptic solve.
WedgeState wedge_initial_state(const DimensionlessParams &dp, const WedgeConfig &c);
WedgeState classical_initial_state(const WedgeConfig &c);

struct WedgeStepInfo {
  int newton_iterations = 0;
  std::vector<double> residual_history;
};

WedgeState wedge_step(const WedgeState &s, const WedgeConfig &c, const DimensionlessParams &dp,
                      WedgeStepInfo *info = nullptr);
WedgeState classical_step(const WedgeState &s, const WedgeConfig &c, const DimensionlessParams &dp,
                          WedgeStepInfo *info = nullptr);

enum class WedgeModel { Interface, Classical };

struct WedgeRun {
  RunRecord record;
  WedgeState final_state;
  bool stopped_at_min_gap = false;
};

/// Step from first contact until t_end or until h_tilde <= h_tilde_min.
WedgeRun run_wedge(WedgeModel model, const WedgeConfig &c, const DimensionlessParams &dp);

} // namespace thinfilm
