#pragma once

#include "bhgs/radial_field.hpp"

namespace bhgs {

/// Functionals of a radial field. S = K - V by definition.
struct EnergyReport {
  double K = 0.0;        ///< 1/2 int |Delta u|^2
  double V = 0.0;        ///< int G(u)
  double S = 0.0;        ///< K - V
  double l2_sq = 0.0;    ///< int |u|^2
  double grad_sq = 0.0;  ///< int |grad u|^2
  double entropy = 0.0;  ///< int |u|^2 ln|u|
  double hess_sq = 0.0;  ///< int |D^2 u|^2 from the radial Hessian
  double pohozaev_residual = 0.0;  ///< |V|
};

/// Below this magnitude |u|^2 ln|u| is taken as 0.
inline constexpr double entropy_floor = 1e-150;

RadialField laplacian(const RadialField& f);

double integrate(const RadialGrid& grid, const Eigen::Ref<const Eigen::VectorXd>& f);

/// 1/2 int |Delta u|^2.
double energy_K(const RadialField& f);
/// int |Delta u|^2.
double laplacian_sq(const RadialField& f);
/// int |D^2 u|^2 via (w'')^2 + 3 (w'/r)^2, with 4 w''(0)^2 at the origin.
double hessian_sq(const RadialField& f);
double grad_sq(const RadialField& f);
double l2_sq(const RadialField& f);
double entropy(const RadialField& f);
/// int u . v for fields on the same grid.
double inner(const RadialField& a, const RadialField& b);

/// x -> u(x / s), resampled on the same grid. Sets truncated() when s > 1
/// drops a non-negligible part of the profile beyond R_max.
RadialField dilate(const RadialField& f, double s);

}  // namespace bhgs
