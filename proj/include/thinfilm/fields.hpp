#pragma once

#include "thinfilm/droplet.hpp"

#include <span>
#include <vector>

namespace thinfilm {

/// Velocity and pressure at one point of the film.
struct FieldSample {
  double x = 0.0;
  double y = 0.0;
  double u = 0.0;
  double v = 0.0;
  double p = 0.0;
};

/// Film data at one abscissa that the closed-form profile needs.
struct LocalProfile {
  double x = 0.0;
  double h = 0.0;
  double hx = 0.0;
  double hxx = 0.0;
  double h3 = 0.0;
  double h4 = 0.0;
  double z1x = 0.0;
  double z1xx = 0.0;
  double z2x = 0.0;
  double z2xx = 0.0;
};

/// Nodal derivatives of a film state, linearly interpolated between nodes.
/// The velocity profile is the small-slip lubrication profile.
class FieldReconstruction {
public:
  FieldReconstruction(const FilmState &s, const DimensionlessParams &dp);

  [[nodiscard]] LocalProfile node(std::size_t j) const;
  /// Throws DomainError for x outside [lambda1, lambda2].
  [[nodiscard]] LocalProfile at(double x) const;
  [[nodiscard]] FieldSample sample(double x, double y) const;
  [[nodiscard]] const DimensionlessParams &params() const { return dp_; }

private:
  DimensionlessParams dp_;
  DomainMap map_;
  std::vector<double> x_;
  std::vector<double> h_, hx_, hxx_, h3_, h4_, z1x_, z1xx_, z2x_, z2xx_;
};

/// p = -h_xx at the nodes.
std::vector<double> pressure(std::span<const double> h, const DomainMap &map);

/// u(y) = h_xxx (2h - y) y / 2 - zeta1_x y - (zeta1_x - h h_xxx + a zeta2_x / 2) / beta.
double horizontal_velocity(const LocalProfile &lp, const DimensionlessParams &dp, double y);
/// du/dy.
double shear_rate(const LocalProfile &lp, const DimensionlessParams &dp, double y);
/// v(y) = -int_0^y du/dx dy'.
double vertical_velocity(const LocalProfile &lp, const DimensionlessParams &dp, double y);
/// Q = int_0^h u dy in closed form.
double depth_flux(const LocalProfile &lp, const DimensionlessParams &dp);

double horizontal_velocity(const FilmState &s, const DimensionlessParams &dp, double x, double y);
double vertical_velocity(const FilmState &s, const DimensionlessParams &dp, double x, double y);
double depth_flux(const FilmState &s, const DimensionlessParams &dp, double x);
/// Q at every node with the solver's nodal stencils.
std::vector<double> depth_flux(const FilmState &s, const DimensionlessParams &dp);

struct SurfaceVelocities {
  double u_s1 = 0.0; ///< liquid-gas: u(h) - d1 zeta1_x
  double u_s2 = 0.0; ///< liquid-solid: u(0)/2 - d2 zeta2_x
};
SurfaceVelocities surface_velocities(const LocalProfile &lp, const DimensionlessParams &dp);
SurfaceVelocities surface_velocities(const FilmState &s, const DimensionlessParams &dp, double x);

/// du/dy - a zeta2_x / 2 - beta u at y = 0; vanishes identically for the profile.
double slip_residual(const LocalProfile &lp, const DimensionlessParams &dp);

/// q (u_s1 - rate) + (u_s2 - rate) at a contact point, with h h_xxx there given by
/// the contact-line closure c1 zeta1_x + c2 zeta2_x (the profile value degenerates at h = 0).
double contact_mass_balance(const FilmState &s, const DimensionlessParams &dp, double rate, bool right);

/// Probe grid of nx by ny points; y runs over [0, h(x)] at each x.
std::vector<FieldSample> sample_grid(const FilmState &s, const DimensionlessParams &dp, std::size_t nx,
                                     std::size_t ny);

} // namespace thinfilm
