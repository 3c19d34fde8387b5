#include "thinfilm/wedge.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>

namespace thinfilm {

void validate(const WedgeConfig &c) {
  auto fail = [](const std::string &m) { throw std::invalid_argument("wedge config: " + m); };
  if (!(c.k1 > 0.0)) fail("k1 must be positive");
  if (!(c.t0 > 0.0)) fail("t0 must be positive");
  if (!(c.eta > 0.0)) fail("eta must be positive");
  if (!(c.x_inf > 1.0)) fail("x_inf must exceed 1");
  if (c.n < 12) fail("n must be at least 12");
  if (c.n_inner < 4) fail("n_inner must be at least 4");
  if (!(c.dt > 0.0)) fail("dt must be positive");
  if (!(c.h_tilde_min > 0.0 && c.h_tilde_min < 1.0)) fail("h_tilde_min must lie in (0, 1)");
}

WedgePosition wedge_position(double t, const WedgeConfig &c) {
  if (t < 0.0) throw std::invalid_argument("wedge_position: t must be non-negative");
  const double s = t / c.t0;
  const double rate = t == 0.0 && c.eta < 1.0 ? -std::numeric_limits<double>::infinity()
                                              : -c.eta * std::pow(s, c.eta - 1.0) / c.t0;
  return {1.0 - std::pow(s, c.eta), t == 0.0 && c.eta > 1.0 ? 0.0 : rate};
}

InnerCoefficients inner_coefficients(double x, double h_tilde, double k1, double beta) {
  const double G = h_tilde + k1 * std::abs(x);
  const double slope = x < 0.0 ? -k1 : k1;
  return {G, G * (1.0 / beta + G / 6.0), slope * (1.0 / beta + G / 3.0)};
}

// ---------------------------------------------------------------------------
// Inner problem
//   d/dx[ r1 A - (a/2beta) G zeta2' ] + h_tilde_rate = 0
//   zeta2 + lambda2 d/dx[ (G/2 + 1/beta) A - (a/2beta + d2) zeta2' ] = 0
//   A(0) = 0, zeta2'(0) = 0, zeta2(end) = zeta2_end
// collocated on Chebyshev-Lobatto points.

struct InnerOperator::Impl {
  std::vector<double> x;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu;
  std::size_t m = 0;
};

InnerOperator::InnerOperator(double end, double h_tilde, const DimensionlessParams &dp, double k1,
                             std::size_t n_intervals)
    : impl_(std::make_unique<Impl>()), end_(end), h_tilde_(h_tilde) {
  if (end == 0.0 || !std::isfinite(end)) throw DomainError("inner problem: contact abscissa must be nonzero");
  if (!(h_tilde > 0.0)) throw DomainError("inner problem: non-positive gap under the wedge");
  const std::size_t N = n_intervals;
  const std::size_t m = N + 1;
  impl_->m = m;
  auto &x = impl_->x;
  x.resize(m);
  for (std::size_t k = 0; k < m; ++k)
    x[k] = 0.5 * end * (1.0 - std::cos(std::numbers::pi * static_cast<double>(k) / static_cast<double>(N)));

  // Barycentric differentiation matrix.
  std::vector<double> w(m);
  for (std::size_t k = 0; k < m; ++k) w[k] = ((k % 2) ? -1.0 : 1.0) * ((k == 0 || k == N) ? 0.5 : 1.0);
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(static_cast<long>(m), static_cast<long>(m));
  for (std::size_t i = 0; i < m; ++i) {
    double diag = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      const double v = (w[j] / w[i]) / (x[i] - x[j]);
      D(static_cast<long>(i), static_cast<long>(j)) = v;
      diag -= v;
    }
    D(static_cast<long>(i), static_cast<long>(i)) = diag;
  }
  const Eigen::MatrixXd D2 = D * D;

  const double beta = dp.beta;
  const double half_a = 0.5 * dp.a / beta;
  const double kappa = half_a + dp.d2;
  const long M = static_cast<long>(m);
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(2 * M, 2 * M);
  // Unknown blocks: A in [0, M), zeta2 in [M, 2M).
  for (long i = 0; i < M; ++i) {
    const InnerCoefficients co = inner_coefficients(x[static_cast<std::size_t>(i)], h_tilde, k1, beta);
    if (!(co.G > 0.0)) throw DomainError("inner problem: non-positive gap under the wedge");
    const double Gp = x[static_cast<std::size_t>(i)] < 0.0 || end < 0.0 ? -k1 : k1;
    if (i == 0) {
      L(0, 0) = 1.0;
    } else {
      for (long j = 0; j < M; ++j) {
        L(i, j) = co.r1 * D(i, j);
        L(i, M + j) = -half_a * (Gp * D(i, j) + co.G * D2(i, j));
      }
      L(i, i) += co.r2;
    }
    const long r = M + i;
    if (i == 0) {
      for (long j = 0; j < M; ++j) L(r, M + j) = D(0, j);
    } else if (i == M - 1) {
      L(r, M + i) = 1.0;
    } else {
      const double lam = dp.lambda2;
      for (long j = 0; j < M; ++j) {
        L(r, j) = lam * (0.5 * co.G + 1.0 / beta) * D(i, j);
        L(r, M + j) = -lam * kappa * D2(i, j);
      }
      L(r, i) += lam * 0.5 * Gp;
      L(r, M + i) += 1.0;
    }
  }
  impl_->lu.compute(L);
}

InnerOperator::~InnerOperator() = default;
InnerOperator::InnerOperator(InnerOperator &&) noexcept = default;
InnerOperator &InnerOperator::operator=(InnerOperator &&) noexcept = default;

InnerSolution InnerOperator::solve(double h_tilde_rate, double zeta2_end) const {
  const long M = static_cast<long>(impl_->m);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(2 * M);
  for (long i = 1; i < M; ++i) rhs(i) = -h_tilde_rate;
  rhs(2 * M - 1) = zeta2_end;
  const Eigen::VectorXd u = impl_->lu.solve(rhs);
  if (!u.allFinite()) throw SingularSystemError("inner problem: singular collocation system", 0.0);
  InnerSolution s;
  s.x = impl_->x;
  s.A.resize(impl_->m);
  s.zeta2.resize(impl_->m);
  for (long i = 0; i < M; ++i) {
    s.A[static_cast<std::size_t>(i)] = u(i);
    s.zeta2[static_cast<std::size_t>(i)] = u(M + i);
  }
  s.A[0] = 0.0; // imposed at the symmetry point, free of elimination round-off
  return s;
}

InnerSolution inner_solve(double lambda, double h_tilde, double h_tilde_rate, double zeta2_end,
                          const DimensionlessParams &dp, const WedgeConfig &c) {
  return InnerOperator(lambda, h_tilde, dp, c.k1, c.n_inner).solve(h_tilde_rate, zeta2_end);
}

// ---------------------------------------------------------------------------
// Outer problem on [lambda, x_inf], uniform nodes.

namespace {

struct OuterStencils {
  std::vector<double> d3_left;  // nodes 0..4 at node 0
  std::vector<double> d3_right; // nodes n-5..n-1 at node n-1
  std::vector<double> d1_left;  // nodes 0..2 at node 0
};

const OuterStencils &outer_stencils() {
  static const OuterStencils s = [] {
    OuterStencils o;
    const std::vector<double> f5{0, 1, 2, 3, 4};
    const std::vector<double> b5{-4, -3, -2, -1, 0};
    const std::vector<double> f3{0, 1, 2};
    o.d3_left = fd_weights(0.0, f5, 3);
    o.d3_right = fd_weights(0.0, b5, 3);
    o.d1_left = fd_weights(0.0, f3, 1);
    return o;
  }();
  return s;
}

double contact_d3(std::span<const double> h, double dx) {
  const auto &w = outer_stencils().d3_left;
  double acc = 0.0;
  for (std::size_t i = 0; i < 5; ++i) acc += w[i] * h[i];
  return acc / (dx * dx * dx);
}

double far_d3(std::span<const double> h, double dx) {
  const auto &w = outer_stencils().d3_right;
  const std::size_t n = h.size();
  double acc = 0.0;
  for (std::size_t i = 0; i < 5; ++i) acc += w[i] * h[n - 5 + i];
  return acc / (dx * dx * dx);
}

double contact_d1(std::span<const double> f, double dx) {
  const auto &w = outer_stencils().d1_left;
  return (w[0] * f[0] + w[1] * f[1] + w[2] * f[2]) / dx;
}

double outer_dx(double lambda, const WedgeConfig &c) { return (c.x_inf - lambda) / static_cast<double>(c.n - 1); }

double mobility_small(double h, double beta) { return (h / 3.0 + 1.0 / beta) * h * h; }

// Unknown layout of the interface-formation step:
//   [h_{-1}, (h_j, z1_j, z2_j) for j = 0..n-1, h_n | lambda']
struct Layout {
  std::size_t n;
  [[nodiscard]] std::size_t ghost_left() const { return 0; }
  [[nodiscard]] std::size_t h(std::size_t j) const { return 1 + 3 * j; }
  [[nodiscard]] std::size_t z1(std::size_t j) const { return 2 + 3 * j; }
  [[nodiscard]] std::size_t z2(std::size_t j) const { return 3 + 3 * j; }
  [[nodiscard]] std::size_t ghost_right() const { return 3 * n + 1; }
  [[nodiscard]] std::size_t band() const { return 3 * n + 2; }
};

// Residual rows of the two density equations, given a padded profile hp (hp[k] = h_{k-1}).
// Writes rows via the callback row(index_of_zeta_unknown, value).
template <class Row>
void zeta_rows(std::span<const double> hp, std::span<const double> z1, std::span<const double> z2, double dx,
               const DimensionlessParams &dp, Row &&row) {
  const std::size_t n = z1.size();
  const double beta = dp.beta;
  const double am1 = 1.0 + dp.a * dp.m;
  auto hn = [&](long j) { return hp[static_cast<std::size_t>(j + 1)]; };
  const std::size_t nf = n - 1;
  std::vector<double> g1(nf), g2(nf);
  for (std::size_t f = 0; f < nf; ++f) {
    const long j = static_cast<long>(f);
    const double hf = 0.5 * (hn(j) + hn(j + 1));
    const double d3 = (hn(j + 2) - 3.0 * hn(j + 1) + 3.0 * hn(j) - hn(j - 1)) / (dx * dx * dx);
    const double P = hf * d3;
    const double z1x = (z1[f + 1] - z1[f]) / dx;
    const double z2x = (z2[f + 1] - z2[f]) / dx;
    g1[f] = (hf + 1.0 / beta + dp.d1) * z1x + 0.5 * dp.a / beta * z2x - (0.5 * hf + 1.0 / beta) * P;
    g2[f] = dp.b1 * z2x + 0.5 * (z1x - P);
  }
  const double cz1 = dp.lambda1;
  const double cz2 = dp.g * dp.lambda1 / beta;
  std::vector<double> hn_nodes(n);
  for (std::size_t j = 0; j < n; ++j) hn_nodes[j] = hn(static_cast<long>(j));
  const double s = contact_d1(hn_nodes, dx);
  const double zc = (dp.b - 0.5 * s * s) / am1;
  row(0, 1, z1[0] - zc);
  row(0, 2, z2[0] - dp.m * z1[0]);
  for (std::size_t j = 1; j + 1 < n; ++j) {
    // scaled by dx^2 to keep the round-off level of the h_xxx terms small
    row(j, 1, cz1 * (g1[j] - g1[j - 1]) * dx - z1[j] * dx * dx);
    row(j, 2, cz2 * (g2[j] - g2[j - 1]) * dx - z2[j] * dx * dx);
  }
  row(n - 1, 1, z1[n - 1]);
  row(n - 1, 2, z2[n - 1]);
}

// Conservative film-equation rows at interior nodes, scaled by dt.
// mob and expl are frozen face values from the old state.
double film_row(std::span<const double> hp, std::span<const double> h_old, std::size_t j, double dx, double dt,
                double xdot, std::span<const double> mob, std::span<const double> expl) {
  auto hn = [&](long k) { return hp[static_cast<std::size_t>(k + 1)]; };
  auto flux = [&](std::size_t f) {
    const long k = static_cast<long>(f);
    const double d3 = (hn(k + 2) - 3.0 * hn(k + 1) + 3.0 * hn(k) - hn(k - 1)) / (dx * dx * dx);
    return mob[f] * d3 + expl[f];
  };
  const long k = static_cast<long>(j);
  const double adv = xdot * (hn(k + 1) - hn(k - 1)) / (2.0 * dx);
  return hn(k) - h_old[j] - dt * adv + dt * (flux(j) - flux(j - 1)) / dx;
}

void check_lambda(double lambda, const WedgeConfig &c) {
  if (!(lambda > 0.0) || !(lambda < 0.5 * c.x_inf)) {
    std::ostringstream os;
    os << "contact point left the admissible range (0, x_inf/2): lambda=" << lambda;
    throw DomainError(os.str());
  }
}

double first_guess(const WedgeState &s, const WedgeConfig &c, double t1) {
  if (s.lambda > 0.0) return std::max(s.lambda + c.dt * s.lambda_rate, 0.5 * s.lambda);
  const double h1 = wedge_position(t1, c).h_tilde;
  return std::max((1.0 - h1) / c.k1, 1e-8);
}

// Newton from the extrapolated contact position, retried from scaled increments when the
// iteration fails (the first step out of lambda = 0 moves the contact far from any cheap guess).
NewtonReport solve_from_guesses(const BorderedSystem &sys, std::vector<double> &u, const WedgeState &s,
                                double guess, const std::function<void(double)> &init, const NewtonOptions &opt) {
  NewtonReport rep;
  int total = 0;
  for (double f : {1.0, 2.0, 4.0, 0.5, 8.0}) {
    const double lam = s.lambda + f * (guess - s.lambda);
    if (!(lam > 0.0)) continue;
    init(lam);
    rep = newton_bordered(sys, u, opt);
    total += rep.iterations;
    if (rep.converged) break;
  }
  rep.iterations = total;
  return rep;
}

} // namespace

double matching_residual(const WedgeState &s, const WedgeConfig &c) {
  if (s.inner.A.empty()) return 0.0;
  const double dx = outer_dx(s.lambda, c);
  const double P = s.h[0] * contact_d3(s.h, dx);
  return s.inner.A.back() - (P - contact_d1(s.zeta1, dx));
}

double contact_bc1_residual(const WedgeState &s, const DimensionlessParams &dp, const WedgeConfig &c) {
  const double dx = outer_dx(s.lambda, c);
  const double P = s.h[0] * contact_d3(s.h, dx);
  return -0.5 * P + dp.c1 * contact_d1(s.zeta1, dx) + dp.c2 * contact_d1(s.zeta2, dx);
}

double contact_angle(const WedgeState &s, const WedgeConfig &c) {
  return c.k1 - contact_d1(s.h, outer_dx(s.lambda, c));
}

WedgeState classical_initial_state(const WedgeConfig &c) {
  validate(c);
  WedgeState s;
  s.h.assign(c.n, 1.0);
  s.zeta1.assign(c.n, 0.0);
  s.zeta2.assign(c.n, 0.0);
  return s;
}

WedgeState wedge_initial_state(const DimensionlessParams &dp, const WedgeConfig &c) {
  WedgeState s = classical_initial_state(c);
  if (!(dp.lambda1 > 0.0)) throw std::invalid_argument("wedge: lambda1 must be positive");
  const std::size_t n = c.n;
  const double dx = outer_dx(0.0, c);
  std::vector<double> hp(n + 2, 1.0);
  BorderedSystem sys;
  sys.n_band = 2 * n;
  sys.kl = 3;
  sys.ku = 3;
  sys.residual = [&](std::span<const double> u, std::span<double> r) {
    std::vector<double> z1(n), z2(n);
    for (std::size_t j = 0; j < n; ++j) {
      z1[j] = u[2 * j];
      z2[j] = u[2 * j + 1];
    }
    zeta_rows(hp, z1, z2, dx, dp, [&](std::size_t j, int which, double v) { r[2 * j + (which - 1)] = v; });
  };
  std::vector<double> u(2 * n, 0.0);
  NewtonOptions opt;
  opt.tol = c.newton_tol;
  if (!newton_bordered(sys, u, opt).converged) throw std::runtime_error("wedge: initial density solve failed");
  for (std::size_t j = 0; j < n; ++j) {
    s.zeta1[j] = u[2 * j];
    s.zeta2[j] = u[2 * j + 1];
  }
  return s;
}

WedgeState wedge_step(const WedgeState &s, const WedgeConfig &c, const DimensionlessParams &dp, WedgeStepInfo *info) {
  validate(c);
  const std::size_t n = c.n;
  const Layout L{n};
  const double dt = c.dt;
  const double t1 = s.t + dt;
  const WedgePosition pos = wedge_position(t1, c);
  if (!(pos.h_tilde > 0.0)) throw DomainError("wedge tip reached the substrate");
  const double beta = dp.beta;
  const double dx0 = outer_dx(s.lambda, c);

  std::vector<double> mob(n - 1), expl(n - 1);
  for (std::size_t f = 0; f + 1 < n; ++f) {
    const double hf = 0.5 * (s.h[f] + s.h[f + 1]);
    mob[f] = mobility_small(hf, beta);
    const double z1x = (s.zeta1[f + 1] - s.zeta1[f]) / dx0;
    const double z2x = (s.zeta2[f + 1] - s.zeta2[f]) / dx0;
    expl[f] = -0.5 * z1x * hf * hf - (z1x + 0.5 * dp.a * z2x) * hf / beta;
  }

  std::optional<InnerOperator> inner;
  auto inner_at = [&](double lam) -> const InnerOperator & {
    if (!inner || inner->end() != lam) inner.emplace(lam, pos.h_tilde, dp, c.k1, c.n_inner);
    return *inner;
  };

  const std::size_t nb = L.band();
  std::vector<double> hp(n + 2), z1(n), z2(n);
  auto unpack = [&](std::span<const double> u) {
    hp[0] = u[L.ghost_left()];
    for (std::size_t j = 0; j < n; ++j) {
      hp[j + 1] = u[L.h(j)];
      z1[j] = u[L.z1(j)];
      z2[j] = u[L.z2(j)];
    }
    hp[n + 1] = u[L.ghost_right()];
  };

  BorderedSystem sys;
  sys.n_band = nb;
  sys.n_border = 1;
  sys.kl = 16;
  sys.ku = 16;
  sys.border_support = {{L.h(0), L.h(1), L.h(2), L.h(3), L.h(4), L.z1(0), L.z1(1), L.z1(2), L.z2(0)}};
  sys.residual = [&](std::span<const double> u, std::span<double> r) {
    const double lam = u[nb];
    if (!(lam > 0.0) || !(lam < 0.5 * c.x_inf)) {
      std::fill(r.begin(), r.end(), std::numeric_limits<double>::quiet_NaN());
      return;
    }
    unpack(u);
    const double dx = outer_dx(lam, c);
    const double rate = (lam - s.lambda) / dt;
    const std::span<const double> hn(hp.data() + 1, n);
    const double P0 = hn[0] * contact_d3(hn, dx);
    r[L.ghost_left()] = -0.5 * P0 + dp.c1 * contact_d1(z1, dx) + dp.c2 * contact_d1(z2, dx);
    r[L.h(0)] = hn[0] - (pos.h_tilde + c.k1 * lam);
    for (std::size_t j = 1; j + 1 < n; ++j) {
      const double xi = static_cast<double>(j) / static_cast<double>(n - 1);
      r[L.h(j)] = film_row(hp, s.h, j, dx, dt, rate * (1.0 - xi), mob, expl);
    }
    r[L.h(n - 1)] = hn[n - 1] - 1.0;
    r[L.ghost_right()] = far_d3(hn, dx);
    zeta_rows(hp, z1, z2, dx, dp, [&](std::size_t j, int which, double v) { r[which == 1 ? L.z1(j) : L.z2(j)] = v; });
    double A_end;
    try {
      A_end = inner_at(lam).solve(pos.rate, z2[0]).A.back();
    } catch (const std::exception &) {
      A_end = std::numeric_limits<double>::quiet_NaN();
    }
    r[nb] = A_end - (P0 - contact_d1(z1, dx));
  };

  std::vector<double> u(nb + 1);
  auto init = [&](double lam) {
    u[L.ghost_left()] = s.h[0];
    for (std::size_t j = 0; j < n; ++j) {
      u[L.h(j)] = s.h[j];
      u[L.z1(j)] = s.zeta1[j];
      u[L.z2(j)] = s.zeta2[j];
    }
    u[L.h(0)] = pos.h_tilde + c.k1 * lam;
    u[L.ghost_right()] = s.h[n - 1];
    u[nb] = lam;
  };

  NewtonOptions opt;
  opt.tol = c.newton_tol;
  opt.max_iter = c.newton_max_iter;
  const NewtonReport rep = solve_from_guesses(sys, u, s, first_guess(s, c, t1), init, opt);
  if (info) {
    info->newton_iterations = rep.iterations;
    info->residual_history = rep.residual_history;
  }
  if (!rep.converged) {
    std::ostringstream os;
    os << "wedge step did not converge at t=" << t1 << " (residual " << rep.residual_history.back() << ")";
    throw std::runtime_error(os.str());
  }
  check_lambda(u[nb], c);
  unpack(u);
  WedgeState out;
  out.t = t1;
  out.lambda = u[nb];
  out.lambda_rate = (out.lambda - s.lambda) / dt;
  out.h.assign(hp.begin() + 1, hp.begin() + 1 + static_cast<long>(n));
  out.zeta1 = z1;
  out.zeta2 = z2;
  out.inner = inner_at(out.lambda).solve(pos.rate, z2[0]);
  return out;
}

WedgeState classical_step(const WedgeState &s, const WedgeConfig &c, const DimensionlessParams &dp,
                          WedgeStepInfo *info) {
  validate(c);
  const std::size_t n = c.n;
  const double dt = c.dt;
  const double t1 = s.t + dt;
  const WedgePosition pos = wedge_position(t1, c);
  if (!(pos.h_tilde > 0.0)) throw DomainError("wedge tip reached the substrate");
  const double beta = dp.beta;

  std::vector<double> mob(n - 1), expl(n - 1, 0.0);
  for (std::size_t f = 0; f + 1 < n; ++f) mob[f] = mobility_small(0.5 * (s.h[f] + s.h[f + 1]), beta);

  // Unknowns: [h_{-1}, h_0..h_{n-1}, h_n | lambda']
  const std::size_t nb = n + 2;
  BorderedSystem sys;
  sys.n_band = nb;
  sys.n_border = 1;
  sys.kl = 5;
  sys.ku = 5;
  sys.border_support = {{1, 2, 3, 4, 5}};
  sys.residual = [&](std::span<const double> u, std::span<double> r) {
    const double lam = u[nb];
    if (!(lam > 0.0) || !(lam < 0.5 * c.x_inf)) {
      std::fill(r.begin(), r.end(), std::numeric_limits<double>::quiet_NaN());
      return;
    }
    const double dx = outer_dx(lam, c);
    const double rate = (lam - s.lambda) / dt;
    const std::span<const double> hp(u.data(), nb);
    const std::span<const double> hn(u.data() + 1, n);
    r[0] = contact_d1(hn, dx) - (c.k1 - c.k2);
    r[1] = hn[0] - (pos.h_tilde + c.k1 * lam);
    for (std::size_t j = 1; j + 1 < n; ++j) {
      const double xi = static_cast<double>(j) / static_cast<double>(n - 1);
      r[1 + j] = film_row(hp, s.h, j, dx, dt, rate * (1.0 - xi), mob, expl);
    }
    r[n] = hn[n - 1] - 1.0;
    r[n + 1] = far_d3(hn, dx);
    r[nb] = hn[0] * contact_d3(hn, dx) - c.A_classical;
  };

  std::vector<double> u(nb + 1);
  auto init = [&](double lam) {
    u[0] = s.h[0];
    for (std::size_t j = 0; j < n; ++j) u[1 + j] = s.h[j];
    u[1] = pos.h_tilde + c.k1 * lam;
    u[n + 1] = s.h[n - 1];
    u[nb] = lam;
  };

  NewtonOptions opt;
  opt.tol = c.newton_tol;
  opt.max_iter = c.newton_max_iter;
  const NewtonReport rep = solve_from_guesses(sys, u, s, first_guess(s, c, t1), init, opt);
  if (info) {
    info->newton_iterations = rep.iterations;
    info->residual_history = rep.residual_history;
  }
  if (!rep.converged) {
    std::ostringstream os;
    os << "classical wedge step did not converge at t=" << t1 << " (residual " << rep.residual_history.back()
       << ")";
    throw std::runtime_error(os.str());
  }
  check_lambda(u[nb], c);
  WedgeState out;
  out.t = t1;
  out.lambda = u[nb];
  out.lambda_rate = (out.lambda - s.lambda) / dt;
  out.h.assign(u.begin() + 1, u.begin() + 1 + static_cast<long>(n));
  out.zeta1.assign(n, 0.0);
  out.zeta2.assign(n, 0.0);
  return out;
}

WedgeRun run_wedge(WedgeModel model, const WedgeConfig &c, const DimensionlessParams &dp) {
  validate(c);
  const auto start = std::chrono::steady_clock::now();
  WedgeRun run;
  run.record.columns = {"t",          "lambda",          "theta",         "h_tilde",         "matching_residual",
                        "bc_residual", "zeta1_contact", "zeta2_contact", "A_contact",       "newton_iterations"};
  if (c.record_wall_time) run.record.columns.emplace_back("wall_time");
  const bool classical = model == WedgeModel::Classical;
  WedgeState s = classical ? classical_initial_state(c) : wedge_initial_state(dp, c);
  int iterations = 0;
  auto sample = [&](const WedgeState &st) {
    const double A = classical ? c.A_classical : (st.inner.A.empty() ? 0.0 : st.inner.A.back());
    double match = 0.0;
    double bc = 0.0;
    if (st.lambda > 0.0) {
      const double dx = outer_dx(st.lambda, c);
      if (classical) {
        match = st.h[0] * contact_d3(st.h, dx) - c.A_classical;
        bc = contact_d1(st.h, dx) - (c.k1 - c.k2);
      } else {
        match = matching_residual(st, c);
        bc = contact_bc1_residual(st, dp, c);
      }
    }
    std::vector<double> row{st.t,  st.lambda, contact_angle(st, c), wedge_position(st.t, c).h_tilde,
                            match, bc,        st.zeta1[0],          st.zeta2[0],
                            A,     static_cast<double>(iterations)};
    if (c.record_wall_time)
      row.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    run.record.rows.push_back(std::move(row));
  };
  sample(s);
  const auto steps = static_cast<std::size_t>(std::ceil(c.t_end / c.dt - 1e-9));
  for (std::size_t k = 1; k <= steps; ++k) {
    if (wedge_position(s.t + c.dt, c).h_tilde <= c.h_tilde_min) {
      run.stopped_at_min_gap = true;
      break;
    }
    WedgeStepInfo info;
    const double target = k == steps ? c.t_end : static_cast<double>(k) * c.dt;
    WedgeConfig ck = c;
    ck.dt = target - s.t;
    s = classical ? classical_step(s, ck, dp, &info) : wedge_step(s, ck, dp, &info);
    s.t = target;
    iterations = info.newton_iterations;
    if (k == steps || k % std::max<std::size_t>(c.record_stride, 1) == 0) sample(s);
  }
  if (run.record.rows.back()[0] != s.t) sample(s);
  run.final_state = std::move(s);
  return run;
}

} // namespace thinfilm
