#pragma once

#include <vector>

#include <Eigen/Core>

namespace lmles {

/// Quadrature on the reference triangle {(x, y) : x, y >= 0, x + y <= 1}.
struct QuadratureRule {
  int degree = 0;
  std::vector<Eigen::Vector2d> points;
  std::vector<double> weights;

  std::size_t size() const noexcept { return points.size(); }
};

/// Collapsed (Duffy) product of Gauss-Jacobi(1,0) and Gauss-Legendre rules,
/// exact for total degree <= `degree`. All weights positive, all points
/// interior. Supported degrees: 1..10.
QuadratureRule quadrature_rule(int degree);

/// Gauss-Legendre nodes/weights on [0, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Gauss rule for weight (1 - x) on [0, 1].
void gauss_jacobi_10(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace lmles
