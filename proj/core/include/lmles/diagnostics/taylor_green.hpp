#pragma once

#include <Eigen/Core>

namespace lmles {

struct TaylorGreenSample {
  Eigen::Vector2d velocity;
  double pressure = 0.0;
  /// (i, j) entry is d u_i / d x_j.
  Eigen::Matrix2d gradient;
};

/// Decaying Taylor-Green vortex array on the unit square:
///   u1 = -sin(w pi y) cos(w pi x) F(t),  u2 = cos(w pi y) sin(w pi x) F(t),
///   p = -(cos(2 w pi y) + cos(2 w pi x)) / 4 F(t)^2,
/// with F(t) = exp(-2 w^2 pi^2 t / Re). The pressure carries F^2 so that the
/// triple solves the incompressible Navier-Stokes equations with f = 0.
TaylorGreenSample taylor_green_exact(double omega, double reynolds, double x, double y, double t);

}  // namespace lmles
