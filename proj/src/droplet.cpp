#include "thinfilm/droplet.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

namespace thinfilm {

std::string to_string(ModelVariant v) {
  return v == ModelVariant::SmallSlip ? "small-slip" : "large-slip";
}

namespace {

// Cell-face quantities; face f sits between nodes f and f+1.
inline double face_avg(std::span<const double> v, std::size_t f) { return 0.5 * (v[f] + v[f + 1]); }
inline double face_d1(std::span<const double> v, std::size_t f, double dx) { return (v[f + 1] - v[f]) / dx; }
// Valid for 1 <= f <= n-3.
inline double face_d3(std::span<const double> v, std::size_t f, double dx) {
  return (v[f + 2] - 3.0 * v[f + 1] + 3.0 * v[f] - v[f - 1]) / (dx * dx * dx);
}

// Affine expression c + sum coef_k * u[idx_k] in the interleaved density unknowns.
struct Affine {
  double c = 0.0;
  std::vector<std::pair<std::size_t, double>> terms;

  Affine &add(std::size_t idx, double coef) {
    terms.emplace_back(idx, coef);
    return *this;
  }
  Affine &scale(double s) {
    c *= s;
    for (auto &t : terms) t.second *= s;
    return *this;
  }
  Affine &plus(const Affine &o, double s = 1.0) {
    c += s * o.c;
    for (const auto &t : o.terms) terms.emplace_back(t.first, s * t.second);
    return *this;
  }
};

} // namespace

DropletSolver::DropletSolver(std::size_t n, DimensionlessParams dp, ModelVariant variant, SolverConfig config)
    : ops_(ReferenceGrid(n, config.symmetric_mode)), dp_(dp), variant_(variant), config_(config) {
  if (!(config_.dt > 0.0)) throw std::invalid_argument("solver: dt must be positive");
  if (config_.theta < 0.5 || config_.theta > 1.0) throw std::invalid_argument("solver: theta must lie in [0.5, 1]");
  if (!(dp_.beta > 0.0)) throw std::invalid_argument("solver: beta must be positive");
  if (dp_.lambda1 > 0.0 && !(dp_.g > 0.0))
    throw std::invalid_argument("solver: lambda2 = g*lambda1 must be positive when lambda1 is");
}

DropletSolver::Coefficients DropletSolver::coefficients() const {
  Coefficients c{};
  const double beta = dp_.beta;
  if (variant_ == ModelVariant::SmallSlip) {
    c.cz1 = dp_.lambda1;
    c.cz2 = dp_.g * dp_.lambda1 / beta;
    c.k22 = dp_.b1;
    c.closure1 = dp_.c1;
    c.closure2 = dp_.c2;
    c.velocity_scale = 1.0 / beta;
  } else {
    // Large-slip system in its own time variable, with lambda1/beta as relaxation number.
    c.cz1 = dp_.lambda1 / beta;
    c.cz2 = dp_.g * dp_.lambda1 / beta;
    c.k22 = 0.25 * dp_.a;
    c.closure1 = 1.0;
    c.closure2 = 0.5 * dp_.a;
    c.velocity_scale = 1.0;
  }
  return c;
}

double DropletSolver::mobility(double h) const {
  if (variant_ == ModelVariant::SmallSlip) return (h / 3.0 + 1.0 / dp_.beta) * h * h;
  return h * h;
}

double DropletSolver::zeta_flux_term(double h, double z1x, double z2x) const {
  if (variant_ == ModelVariant::SmallSlip)
    return -0.5 * z1x * h * h - (z1x + 0.5 * dp_.a * z2x) * h / dp_.beta;
  return -(z1x + 0.5 * dp_.a * z2x) * h;
}

ZetaFields DropletSolver::solve_zeta(std::span<const double> h, const DomainMap &map, double t) const {
  const std::size_t n = grid().size();
  if (h.size() != n) throw std::invalid_argument("solve_zeta: profile length does not match the grid");
  ZetaFields z{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  if (relaxation_limit()) return z;

  const double width = map.width();
  const double dx = width * grid().dxi();
  const double am1 = 1.0 + dp_.a * dp_.m;
  if (am1 == 0.0) throw std::invalid_argument("solve_zeta: 1 + a*m vanishes");
  const double sl = ops_.at(h, 1, 0, width);
  const double sr = ops_.at(h, 1, n - 1, width);
  const double zl = (dp_.b - 0.5 * sl * sl) / am1;
  const double zr = (dp_.b - 0.5 * sr * sr) / am1;

  const Coefficients co = coefficients();
  const bool small = variant_ == ModelVariant::SmallSlip;
  const double beta = dp_.beta;
  auto i1 = [](std::size_t j) { return 2 * j; };
  auto i2 = [](std::size_t j) { return 2 * j + 1; };

  // h*h_xxx on faces; the two outermost faces interpolate towards the contact closure.
  std::vector<Affine> P(n - 1);
  for (std::size_t f = 1; f + 2 < n; ++f) P[f].c = face_avg(h, f) * face_d3(h, f, dx);
  const Stencil &left = ops_.row(1, 0);
  const Stencil &right = ops_.row(1, n - 1);
  Affine kl, kr;
  for (std::size_t i = 0; i < left.w.size(); ++i) {
    kl.add(i1(left.start + i), co.closure1 * left.w[i] / dx);
    kl.add(i2(left.start + i), co.closure2 * left.w[i] / dx);
  }
  for (std::size_t i = 0; i < right.w.size(); ++i) {
    kr.add(i1(right.start + i), co.closure1 * right.w[i] / dx);
    kr.add(i2(right.start + i), co.closure2 * right.w[i] / dx);
  }
  P[0] = Affine{}.plus(kl, 2.0 / 3.0).plus(P[1], 1.0 / 3.0);
  P[n - 2] = Affine{}.plus(kr, 2.0 / 3.0).plus(P[n - 3], 1.0 / 3.0);

  auto flux1 = [&](std::size_t f) {
    const double hf = face_avg(h, f);
    const double k11 = small ? hf + 1.0 / beta + dp_.d1 : 1.0;
    const double k12 = small ? 0.5 * dp_.a / beta : 0.5 * dp_.a;
    const double k1p = small ? 0.5 * hf + 1.0 / beta : 1.0;
    Affine g;
    g.add(i1(f + 1), k11 / dx).add(i1(f), -k11 / dx);
    g.add(i2(f + 1), k12 / dx).add(i2(f), -k12 / dx);
    g.plus(P[f], -k1p);
    return g;
  };
  auto flux2 = [&](std::size_t f) {
    Affine g;
    g.add(i2(f + 1), co.k22 / dx).add(i2(f), -co.k22 / dx);
    g.add(i1(f + 1), 0.5 / dx).add(i1(f), -0.5 / dx);
    g.plus(P[f], -0.5);
    return g;
  };

  const std::size_t N = 2 * n;
  BandedMatrix A(N, 3, 3);
  std::vector<double> rhs(N, 0.0);
  A(i1(0), i1(0)) = 1.0;
  rhs[i1(0)] = zl;
  A(i2(0), i2(0)) = 1.0;
  rhs[i2(0)] = dp_.m * zl;
  A(i1(n - 1), i1(n - 1)) = 1.0;
  rhs[i1(n - 1)] = zr;
  A(i2(n - 1), i2(n - 1)) = 1.0;
  rhs[i2(n - 1)] = dp_.m * zr;

  const auto x = map_to_physical(grid(), map);
  for (std::size_t j = 1; j + 1 < n; ++j) {
    for (int eq = 0; eq < 2; ++eq) {
      const double pref = (eq == 0 ? co.cz1 : co.cz2) / dx;
      Affine row = eq == 0 ? flux1(j) : flux2(j);
      row.plus(eq == 0 ? flux1(j - 1) : flux2(j - 1), -1.0);
      row.scale(pref);
      const std::size_t r = eq == 0 ? i1(j) : i2(j);
      row.add(r, -1.0);
      for (const auto &[idx, coef] : row.terms) A(r, idx) += coef;
      rhs[r] = -row.c;
      if (sources_) {
        const auto &src = eq == 0 ? sources_->zeta1 : sources_->zeta2;
        if (src) rhs[r] += src(x[j], t);
      }
    }
  }

  std::vector<double> u;
  try {
    BandedLU lu(std::move(A));
    u = lu.solve(rhs);
  } catch (const SingularSystemError &e) {
    std::ostringstream os;
    os << "density system is singular: " << e.what();
    throw SingularSystemError(os.str(), e.condition_estimate());
  }
  for (std::size_t j = 0; j < n; ++j) {
    z.zeta1[j] = u[i1(j)];
    z.zeta2[j] = u[i2(j)];
  }
  // Dirichlet values exactly as imposed, free of elimination round-off.
  z.zeta1.front() = zl;
  z.zeta2.front() = dp_.m * zl;
  z.zeta1.back() = zr;
  z.zeta2.back() = dp_.m * zr;
  return z;
}

std::vector<double> DropletSolver::flux(const FilmState &s) const {
  const DomainMap map = s.map();
  const auto h3 = ops_.apply(s.h, 3, map);
  const auto z1x = ops_.apply(s.zeta1, 1, map);
  const auto z2x = ops_.apply(s.zeta2, 1, map);
  std::vector<double> q(s.size());
  for (std::size_t j = 0; j < q.size(); ++j)
    q[j] = mobility(s.h[j]) * h3[j] + zeta_flux_term(s.h[j], z1x[j], z2x[j]);
  return q;
}

double DropletSolver::contact_closure(const FilmState &s, bool right) const {
  const Coefficients co = coefficients();
  const std::size_t j = right ? s.size() - 1 : 0;
  const double w = s.map().width();
  return co.closure1 * ops_.at(s.zeta1, 1, j, w) + co.closure2 * ops_.at(s.zeta2, 1, j, w);
}

ContactRates DropletSolver::contact_velocity(const FilmState &s) const {
  const Coefficients co = coefficients();
  const double w = s.map().width();
  const std::size_t n = s.size();
  ContactRates r;
  if (relaxation_limit()) {
    // Kinematic rate Q/h -> velocity_scale * h h_xxx, extrapolated from the first interior faces.
    const double dx = w * grid().dxi();
    auto p = [&](std::size_t f) { return face_avg(s.h, f) * face_d3(s.h, f, dx); };
    r.left = co.velocity_scale * (2.5 * p(1) - 1.5 * p(2));
    r.right = co.velocity_scale * (2.5 * p(n - 3) - 1.5 * p(n - 4));
  } else {
    auto rate = [&](std::size_t j, bool right) {
      const double z1x = ops_.at(s.zeta1, 1, j, w);
      const double z2x = ops_.at(s.zeta2, 1, j, w);
      return co.velocity_scale * (contact_closure(s, right) - z1x - 0.5 * dp_.a * z2x);
    };
    r.left = rate(0, false);
    r.right = rate(n - 1, true);
  }
  if (config_.symmetric_mode) {
    const double sp = 0.5 * (r.right - r.left);
    r.left = -sp;
    r.right = sp;
  }
  return r;
}

FilmState DropletSolver::project(FilmState s) const {
  ZetaFields z = solve_zeta(s.h, s.map(), s.t);
  s.zeta1 = std::move(z.zeta1);
  s.zeta2 = std::move(z.zeta2);
  return s;
}

void DropletSolver::check_state(const FilmState &s) const {
  const std::size_t n = grid().size();
  if (s.h.size() != n || s.zeta1.size() != n || s.zeta2.size() != n) {
    std::ostringstream os;
    os << "state has " << s.h.size() << " nodes but the solver grid has " << n;
    throw std::invalid_argument(os.str());
  }
  if (!(s.lambda2 > s.lambda1)) throw DomainError("contact points out of order: lambda1 >= lambda2");
}

FilmState DropletSolver::step(const FilmState &s) {
  check_state(s);
  if (min_width_ <= 0.0) min_width_ = 10.0 * grid().dxi() * s.map().width();
  return relaxation_limit() ? step_relaxation_limit(s) : step_semi_implicit(s);
}

FilmState DropletSolver::step_semi_implicit(const FilmState &s) {
  const std::size_t n = grid().size();
  const double dt = config_.dt;
  const double dxi = grid().dxi();
  const double theta = config_.theta;

  ContactRates rates = config_.freeze_contact ? ContactRates{} : contact_velocity(s);
  FilmState out;
  out.t = s.t + dt;
  out.lambda1 = s.lambda1 + dt * rates.left;
  out.lambda2 = s.lambda2 + dt * rates.right;
  if (!(out.map().width() > min_width_)) {
    std::ostringstream os;
    os << "domain collapse at t=" << out.t << ": width " << out.map().width() << " below " << min_width_;
    throw DomainError(os.str());
  }

  const double J0 = s.map().width();
  const double J1 = out.map().width();
  const double dx0 = J0 * dxi;
  const double dx1 = J1 * dxi;

  // Frozen mobility, explicit density terms and old-time parts of the theta scheme.
  std::vector<double> mob(n - 1, 0.0), explicit_flux(n - 1, 0.0), xdot(n - 1, 0.0);
  for (std::size_t f = 1; f + 2 < n; ++f) {
    const double hf = face_avg(s.h, f);
    mob[f] = mobility(hf);
    xdot[f] = domain_velocity(rates.left, rates.right, grid().face(f));
    const double z1x = face_d1(s.zeta1, f, dx0);
    const double z2x = face_d1(s.zeta2, f, dx0);
    explicit_flux[f] = zeta_flux_term(hf, z1x, z2x);
    if (theta < 1.0) explicit_flux[f] += (1.0 - theta) * (mob[f] * face_d3(s.h, f, dx0) - xdot[f] * hf);
  }

  std::vector<double> src(n, 0.0);
  if (sources_ && sources_->h) {
    const auto x1 = map_to_physical(grid(), out.map());
    for (std::size_t j = 1; j + 1 < n; ++j) src[j] = sources_->h(x1[j], out.t);
  }

  // Unknowns h_1..h_{n-2}; row r <-> node r+1.
  const std::size_t N = n - 2;
  const double c3 = 1.0 / (dx1 * dx1 * dx1);
  const double ratio = dt / dxi;
  BandedMatrix A(N, 2, 2);
  std::vector<double> rhs(N);
  auto add = [&](std::size_t row, std::size_t node, double v) {
    if (node == 0 || node == n - 1) return; // h = 0 at the contacts
    A(row, node - 1) += v;
  };
  for (std::size_t j = 1; j + 1 < n; ++j) {
    const std::size_t r = j - 1;
    add(r, j, J1);
    rhs[r] = J0 * s.h[j] + dt * J1 * src[j];
    // face j (right, +) and face j-1 (left, -); outermost faces carry no flux
    for (int side = 0; side < 2; ++side) {
      const std::size_t f = side == 0 ? j : j - 1;
      const double sgn = side == 0 ? 1.0 : -1.0;
      if (f == 0 || f == n - 2) continue;
      const double k = sgn * ratio * theta * mob[f] * c3;
      add(r, f + 2, k);
      add(r, f + 1, -3.0 * k);
      add(r, f, 3.0 * k);
      add(r, f - 1, -k);
      const double a = -sgn * ratio * theta * xdot[f] * 0.5;
      add(r, f, a);
      add(r, f + 1, a);
      rhs[r] -= sgn * ratio * explicit_flux[f];
    }
  }

  auto residual = [&](std::span<const double> hn) {
    std::vector<double> res = A.multiply(hn);
    for (std::size_t i = 0; i < N; ++i) res[i] -= rhs[i];
    return res;
  };

  BandedLU lu(A);
  std::vector<double> u(s.h.begin() + 1, s.h.end() - 1);
  std::vector<double> history;
  std::vector<double> res = residual(u);
  history.push_back(max_abs(res));
  // The system is linear, so one update solves it up to round-off in |A||u|.
  auto tolerance = [&] {
    std::vector<double> au(N);
    for (std::size_t i = 0; i < N; ++i) {
      double acc = std::abs(rhs[i]);
      const std::size_t lo = i >= 2 ? i - 2 : 0;
      for (std::size_t k = lo; k < std::min(N, i + 3); ++k) acc += std::abs(A(i, k) * u[k]);
      au[i] = acc;
    }
    return config_.newton_tol * std::max(1.0, 1e-4 * max_abs(au));
  };
  int it = 0;
  while (history.back() > tolerance() && it < config_.newton_max_iter) {
    for (double &v : res) v = -v;
    lu.solve_in_place(res);
    for (std::size_t i = 0; i < N; ++i) u[i] += res[i];
    res = residual(u);
    history.push_back(max_abs(res));
    ++it;
    if (!std::isfinite(history.back())) break;
  }
  if (!(history.back() <= tolerance())) {
    std::ostringstream os;
    os << "film update did not converge at t=" << out.t << " (residual " << history.back() << ")";
    throw SolverError(os.str(), history);
  }
  last_iterations_ = it;

  out.h.assign(n, 0.0);
  for (std::size_t j = 1; j + 1 < n; ++j) out.h[j] = u[j - 1];
  for (std::size_t j = 1; j + 1 < n; ++j) {
    if (out.h[j] < -config_.negative_tol) {
      std::ostringstream os;
      os << "negative film thickness h=" << out.h[j] << " at node " << j << " (t=" << out.t << ")";
      throw SolverError(os.str(), history);
    }
    if (config_.h_min > 0.0) out.h[j] = std::max(out.h[j], config_.h_min);
  }
  ZetaFields z = solve_zeta(out.h, out.map(), out.t);
  out.zeta1 = std::move(z.zeta1);
  out.zeta2 = std::move(z.zeta2);
  return out;
}

FilmState DropletSolver::step_relaxation_limit(const FilmState &s) {
  const std::size_t n = grid().size();
  const double dt = config_.dt;
  const double dxi = grid().dxi();
  const double theta = config_.theta;
  const double slope = std::sqrt(2.0 * std::max(dp_.b, 0.0));
  const double J0 = s.map().width();
  const double dx0 = J0 * dxi;
  const std::size_t N = n - 2;

  std::vector<double> mob(n - 1, 0.0);
  for (std::size_t f = 1; f + 2 < n; ++f) mob[f] = mobility(face_avg(s.h, f));
  const Stencil &sl = ops_.row(1, 0);
  const Stencil &sr = ops_.row(1, n - 1);
  const double t1 = s.t + dt;

  std::vector<double> hn(n, 0.0);
  BorderedSystem sys;
  sys.n_band = N;
  sys.n_border = 2;
  sys.kl = 2;
  sys.ku = 2;
  sys.border_support = {{0, 1}, {N - 2, N - 1}};
  sys.residual = [&](std::span<const double> u, std::span<double> r) {
    const double l1 = u[N];
    const double l2 = u[N + 1];
    const double J1 = l2 - l1;
    const double dx1 = J1 * dxi;
    const double rl = (l1 - s.lambda1) / dt;
    const double rr = (l2 - s.lambda2) / dt;
    for (std::size_t j = 1; j + 1 < n; ++j) hn[j] = u[j - 1];
    auto F = [&](std::size_t f) {
      if (f == 0 || f == n - 2) return 0.0;
      const double xd = domain_velocity(rl, rr, grid().face(f));
      double v = theta * (mob[f] * face_d3(hn, f, dx1) - xd * face_avg(hn, f));
      if (theta < 1.0) v += (1.0 - theta) * (mob[f] * face_d3(s.h, f, dx0) - xd * face_avg(s.h, f));
      return v;
    };
    for (std::size_t j = 1; j + 1 < n; ++j) {
      double src = 0.0;
      if (sources_ && sources_->h) src = sources_->h(l1 + grid().xi(j) * J1, t1);
      r[j - 1] = J1 * hn[j] - J0 * s.h[j] + (dt / dxi) * (F(j) - F(j - 1)) - dt * J1 * src;
    }
    double dl = 0.0, dr = 0.0;
    for (std::size_t i = 0; i < sl.w.size(); ++i) dl += sl.w[i] * hn[sl.start + i];
    for (std::size_t i = 0; i < sr.w.size(); ++i) dr += sr.w[i] * hn[sr.start + i];
    r[N] = dl / dx1 - slope;
    r[N + 1] = dr / dx1 + slope;
  };

  std::vector<double> u(N + 2);
  for (std::size_t j = 1; j + 1 < n; ++j) u[j - 1] = s.h[j];
  u[N] = s.lambda1;
  u[N + 1] = s.lambda2;
  NewtonOptions opt;
  opt.tol = config_.newton_tol;
  opt.max_iter = config_.newton_max_iter;
  const NewtonReport rep = newton_bordered(sys, u, opt);
  if (!rep.converged) {
    std::ostringstream os;
    os << "contact-constrained film update did not converge at t=" << t1;
    throw SolverError(os.str(), rep.residual_history);
  }
  last_iterations_ = rep.iterations;

  FilmState out;
  out.t = t1;
  out.lambda1 = u[N];
  out.lambda2 = u[N + 1];
  if (!(out.map().width() > min_width_)) throw DomainError("domain collapse in the relaxation-limit update");
  out.h.assign(n, 0.0);
  for (std::size_t j = 1; j + 1 < n; ++j) {
    out.h[j] = u[j - 1];
    if (out.h[j] < -config_.negative_tol) {
      std::ostringstream os;
      os << "negative film thickness h=" << out.h[j] << " at node " << j << " (t=" << out.t << ")";
      throw SolverError(os.str(), rep.residual_history);
    }
  }
  out.zeta1.assign(n, 0.0);
  out.zeta2.assign(n, 0.0);
  return out;
}

double DropletSolver::total_mass(const FilmState &s) const {
  return trapezoid(s.h, s.map().width() * grid().dxi());
}

SteadyResidual DropletSolver::steady_residual(const FilmState &s) const {
  const std::size_t n = s.size();
  const double w = s.map().width();
  const double dx = w * grid().dxi();
  std::vector<double> q(n - 1, 0.0);
  for (std::size_t f = 1; f + 2 < n; ++f) {
    const double hf = face_avg(s.h, f);
    q[f] = mobility(hf) * face_d3(s.h, f, dx) +
           zeta_flux_term(hf, face_d1(s.zeta1, f, dx), face_d1(s.zeta2, f, dx));
  }
  SteadyResidual r;
  for (std::size_t j = 1; j + 1 < n; ++j) r.pde = std::max(r.pde, std::abs((q[j] - q[j - 1]) / dx));

  auto p_left = face_avg(s.h, 1) * face_d3(s.h, 1, dx) * 2.5 - face_avg(s.h, 2) * face_d3(s.h, 2, dx) * 1.5;
  auto p_right =
      face_avg(s.h, n - 3) * face_d3(s.h, n - 3, dx) * 2.5 - face_avg(s.h, n - 4) * face_d3(s.h, n - 4, dx) * 1.5;
  for (int side = 0; side < 2; ++side) {
    const bool right = side == 1;
    const std::size_t j = right ? n - 1 : 0;
    const double slope = ops_.at(s.h, 1, j, w);
    const double k = relaxation_limit() ? 0.0 : contact_closure(s, right);
    r.bc = std::max(r.bc, std::abs(k - (right ? p_right : p_left)));
    r.bc = std::max(r.bc, std::abs(s.zeta1[j] + dp_.a * s.zeta2[j] + 0.5 * slope * slope - dp_.b));
    r.bc = std::max(r.bc, std::abs(dp_.m * s.zeta1[j] - s.zeta2[j]));
  }
  return r;
}

std::vector<std::string> DropletSolver::record_columns() const {
  std::vector<std::string> c{"t",         "t_original", "lambda1",   "lambda2", "mass",
                             "max_h",     "slope_left", "slope_right", "zeta1_max", "zeta2_max",
                             "r_pde",     "newton_iterations"};
  if (config_.record_wall_time) c.emplace_back("wall_time");
  return c;
}

void DropletSolver::append_sample(RunRecord &rec, const FilmState &s, double wall) const {
  const double w = s.map().width();
  const double t_orig = variant_ == ModelVariant::LargeSlip ? dp_.beta * s.t : s.t;
  std::vector<double> row{s.t,
                          t_orig,
                          s.lambda1,
                          s.lambda2,
                          total_mass(s),
                          max_abs(s.h),
                          ops_.at(s.h, 1, 0, w),
                          ops_.at(s.h, 1, s.size() - 1, w),
                          max_abs(s.zeta1),
                          max_abs(s.zeta2),
                          steady_residual(s).pde,
                          static_cast<double>(last_iterations_)};
  if (config_.record_wall_time) row.push_back(wall);
  rec.rows.push_back(std::move(row));
}

RunResult DropletSolver::run(const FilmState &initial, std::span<const double> snapshot_times) {
  check_state(initial);
  const auto start = std::chrono::steady_clock::now();
  auto wall = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };
  min_width_ = 10.0 * grid().dxi() * initial.map().width();
  last_iterations_ = 0;

  RunResult result;
  result.record.columns = record_columns();
  FilmState s = project(initial);
  append_sample(result.record, s, wall());
  std::vector<double> pending(snapshot_times.begin(), snapshot_times.end());
  std::sort(pending.begin(), pending.end());
  std::size_t next_snap = 0;
  auto take_snapshots = [&](const FilmState &st) {
    while (next_snap < pending.size() && st.t >= pending[next_snap] - 1e-12 * std::max(1.0, st.t)) {
      result.snapshots.push_back(st);
      ++next_snap;
    }
  };
  take_snapshots(s);

  const double t0 = s.t;
  const double dt = config_.dt;
  const double span = config_.t_end - t0;
  const auto steps = span > 0.0 ? static_cast<std::size_t>(std::ceil(span / dt - 1e-9)) : 0;
  const double dt_saved = config_.dt;
  for (std::size_t k = 1; k <= steps; ++k) {
    const double target = k == steps ? config_.t_end : t0 + static_cast<double>(k) * dt;
    config_.dt = target - s.t;
    try {
      s = step(s);
    } catch (...) {
      config_.dt = dt_saved;
      throw;
    }
    config_.dt = dt_saved;
    s.t = target;
    take_snapshots(s);
    const bool last = k == steps;
    const bool steady = config_.steady_tol > 0.0 && steady_residual(s).pde <= config_.steady_tol;
    if (last || steady || k % std::max<std::size_t>(config_.record_stride, 1) == 0)
      append_sample(result.record, s, wall());
    if (steady) break;
  }
  result.final_state = s;
  return result;
}

FilmState parabola_state(std::size_t n, double amplitude, double half_width, double center) {
  FilmState s;
  s.lambda1 = center - half_width;
  s.lambda2 = center + half_width;
  s.h.assign(n, 0.0);
  for (std::size_t j = 1; j + 1 < n; ++j) {
    const double xi = static_cast<double>(j) / static_cast<double>(n - 1);
    const double y = 2.0 * xi - 1.0;
    s.h[j] = amplitude * (1.0 - y * y);
  }
  s.zeta1.assign(n, 0.0);
  s.zeta2.assign(n, 0.0);
  return s;
}

FilmState equilibrium_state(std::size_t n, double b, double mass, double center) {
  // h = (s/(2L))(L^2 - x^2) has contact slope s and mass (2/3) s L^2.
  const double slope = std::sqrt(2.0 * b);
  const double half = std::sqrt(1.5 * mass / slope);
  return parabola_state(n, 0.5 * slope * half, half, center);
}

} // namespace thinfilm
