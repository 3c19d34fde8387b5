#include "thinfilm/fields.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace thinfilm {

FieldReconstruction::FieldReconstruction(const FilmState &s, const DimensionlessParams &dp)
    : dp_(dp), map_(s.map()) {
  const std::size_t n = s.size();
  if (n < 6 || s.zeta1.size() != n || s.zeta2.size() != n)
    throw std::invalid_argument("field reconstruction: inconsistent state");
  const ReferenceGrid grid(n);
  const DiffOps ops(grid);
  x_ = map_to_physical(grid, map_);
  h_ = s.h;
  hx_ = ops.apply(s.h, 1, map_);
  hxx_ = ops.apply(s.h, 2, map_);
  h3_ = ops.apply(s.h, 3, map_);
  h4_ = ops.apply(s.h, 4, map_);
  z1x_ = ops.apply(s.zeta1, 1, map_);
  z1xx_ = ops.apply(s.zeta1, 2, map_);
  z2x_ = ops.apply(s.zeta2, 1, map_);
  z2xx_ = ops.apply(s.zeta2, 2, map_);
}

LocalProfile FieldReconstruction::node(std::size_t j) const {
  return {x_[j], h_[j], hx_[j], hxx_[j], h3_[j], h4_[j], z1x_[j], z1xx_[j], z2x_[j], z2xx_[j]};
}

LocalProfile FieldReconstruction::at(double x) const {
  const double xi = map_.to_reference(x);
  if (!(xi >= -1e-14 && xi <= 1.0 + 1e-14)) {
    std::ostringstream os;
    os << "x=" << x << " outside the film [" << map_.left << ", " << map_.right << "]";
    throw DomainError(os.str());
  }
  const std::size_t n = x_.size();
  const double pos = std::clamp(xi, 0.0, 1.0) * static_cast<double>(n - 1);
  const std::size_t j = std::min(static_cast<std::size_t>(pos), n - 2);
  const double w = pos - static_cast<double>(j);
  auto lerp = [&](const std::vector<double> &v) { return (1.0 - w) * v[j] + w * v[j + 1]; };
  return {x, lerp(h_), lerp(hx_), lerp(hxx_), lerp(h3_), lerp(h4_), lerp(z1x_), lerp(z1xx_), lerp(z2x_), lerp(z2xx_)};
}

FieldSample FieldReconstruction::sample(double x, double y) const {
  const LocalProfile lp = at(x);
  return {x, y, horizontal_velocity(lp, dp_, y), vertical_velocity(lp, dp_, y), -lp.hxx};
}

std::vector<double> pressure(std::span<const double> h, const DomainMap &map) {
  const ReferenceGrid grid(h.size());
  const DiffOps ops(grid);
  std::vector<double> p = ops.apply(h, 2, map);
  for (double &v : p) v = -v;
  return p;
}

namespace {

void check_height(const LocalProfile &lp, double y) {
  const double top = std::max(lp.h, 0.0);
  if (y < 0.0 || y > top * (1.0 + 1e-12) + 1e-14) {
    std::ostringstream os;
    os << "y=" << y << " outside the film [0, " << top << "] at x=" << lp.x;
    throw DomainError(os.str());
  }
}

double slip_velocity(const LocalProfile &lp, const DimensionlessParams &dp) {
  return -(lp.z1x - lp.h * lp.h3 + 0.5 * dp.a * lp.z2x) / dp.beta;
}

} // namespace

double horizontal_velocity(const LocalProfile &lp, const DimensionlessParams &dp, double y) {
  check_height(lp, y);
  return 0.5 * lp.h3 * (2.0 * lp.h - y) * y - lp.z1x * y + slip_velocity(lp, dp);
}

double shear_rate(const LocalProfile &lp, const DimensionlessParams &, double y) {
  check_height(lp, y);
  return lp.h3 * (lp.h - y) - lp.z1x;
}

double vertical_velocity(const LocalProfile &lp, const DimensionlessParams &dp, double y) {
  check_height(lp, y);
  // du/dx = h4 (2h - y) y / 2 + h3 hx y - z1xx y - (z1xx - hx h3 - h h4 + a z2xx / 2) / beta
  const double y2 = y * y;
  const double slip_x = -(lp.z1xx - lp.hx * lp.h3 - lp.h * lp.h4 + 0.5 * dp.a * lp.z2xx) / dp.beta;
  const double integral =
      0.5 * lp.h4 * (lp.h * y2 - y2 * y / 3.0) + 0.5 * lp.h3 * lp.hx * y2 - 0.5 * lp.z1xx * y2 + slip_x * y;
  return 0.0 - integral;
}

double depth_flux(const LocalProfile &lp, const DimensionlessParams &dp) {
  const double h = lp.h;
  return (h / 3.0 + 1.0 / dp.beta) * h * h * lp.h3 - 0.5 * lp.z1x * h * h -
         (lp.z1x + 0.5 * dp.a * lp.z2x) * h / dp.beta;
}

double horizontal_velocity(const FilmState &s, const DimensionlessParams &dp, double x, double y) {
  return horizontal_velocity(FieldReconstruction(s, dp).at(x), dp, y);
}

double vertical_velocity(const FilmState &s, const DimensionlessParams &dp, double x, double y) {
  return vertical_velocity(FieldReconstruction(s, dp).at(x), dp, y);
}

double depth_flux(const FilmState &s, const DimensionlessParams &dp, double x) {
  return depth_flux(FieldReconstruction(s, dp).at(x), dp);
}

std::vector<double> depth_flux(const FilmState &s, const DimensionlessParams &dp) {
  const FieldReconstruction fr(s, dp);
  std::vector<double> q(s.size());
  for (std::size_t j = 0; j < q.size(); ++j) q[j] = depth_flux(fr.node(j), dp);
  return q;
}

SurfaceVelocities surface_velocities(const LocalProfile &lp, const DimensionlessParams &dp) {
  const double top = std::max(lp.h, 0.0);
  SurfaceVelocities sv;
  sv.u_s1 = 0.5 * lp.h3 * top * top - lp.z1x * top + slip_velocity(lp, dp) - dp.d1 * lp.z1x;
  sv.u_s2 = 0.5 * slip_velocity(lp, dp) - dp.d2 * lp.z2x;
  return sv;
}

SurfaceVelocities surface_velocities(const FilmState &s, const DimensionlessParams &dp, double x) {
  return surface_velocities(FieldReconstruction(s, dp).at(x), dp);
}

double slip_residual(const LocalProfile &lp, const DimensionlessParams &dp) {
  return shear_rate(lp, dp, 0.0) - 0.5 * dp.a * lp.z2x - dp.beta * horizontal_velocity(lp, dp, 0.0);
}

double contact_mass_balance(const FilmState &s, const DimensionlessParams &dp, double rate, bool right) {
  const FieldReconstruction fr(s, dp);
  const LocalProfile lp = fr.node(right ? s.size() - 1 : 0);
  const double P = dp.c1 * lp.z1x + dp.c2 * lp.z2x;
  const double slip = -(lp.z1x - P + 0.5 * dp.a * lp.z2x) / dp.beta;
  const double u_s1 = slip - dp.d1 * lp.z1x;
  const double u_s2 = 0.5 * slip - dp.d2 * lp.z2x;
  return dp.q * (u_s1 - rate) + (u_s2 - rate);
}

std::vector<FieldSample> sample_grid(const FilmState &s, const DimensionlessParams &dp, std::size_t nx,
                                     std::size_t ny) {
  if (nx < 2 || ny < 2) throw std::invalid_argument("sample_grid: need at least 2 x 2 probes");
  const FieldReconstruction fr(s, dp);
  std::vector<FieldSample> out;
  out.reserve(nx * ny);
  for (std::size_t i = 0; i < nx; ++i) {
    const double x = i + 1 == nx ? s.lambda2
                                 : s.lambda1 + (s.lambda2 - s.lambda1) * static_cast<double>(i) / static_cast<double>(nx - 1);
    const LocalProfile lp = fr.at(x);
    const double top = std::max(lp.h, 0.0);
    for (std::size_t k = 0; k < ny; ++k) {
      const double y = top * static_cast<double>(k) / static_cast<double>(ny - 1);
      out.push_back({x, y, horizontal_velocity(lp, dp, y), vertical_velocity(lp, dp, y), -lp.hxx});
    }
  }
  return out;
}

} // namespace thinfilm
