#include "lmles/fem/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "lmles/error.hpp"

namespace lmles {

namespace {

// Golub-Welsch for monic Jacobi polynomials on [-1, 1], weight
// (1 - x)^alpha (1 + x)^beta; results mapped to [0, 1] with the weight
// rescaled to (1 - u)^alpha u^beta.
void golub_welsch_jacobi(int n, double alpha, double beta, std::vector<double>& nodes,
                         std::vector<double>& weights) {
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  const double ab = alpha + beta;
  for (int k = 0; k < n; ++k) {
    const double two_k_ab = 2.0 * k + ab;
    if (k == 0) {
      jacobi(0, 0) = (beta - alpha) / (ab + 2.0);
    } else {
      jacobi(k, k) = (beta * beta - alpha * alpha) / (two_k_ab * (two_k_ab + 2.0));
    }
    if (k + 1 < n) {
      const double j = k + 1.0;
      const double t = 2.0 * j + ab;
      const double b = 4.0 * j * (j + alpha) * (j + beta) * (j + ab) / (t * t * (t + 1.0) * (t - 1.0));
      jacobi(k, k + 1) = jacobi(k + 1, k) = std::sqrt(b);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);
  // mu0 = integral of the weight over [-1, 1].
  const double mu0 = std::pow(2.0, ab + 1.0) * std::tgamma(alpha + 1.0) * std::tgamma(beta + 1.0) /
                     std::tgamma(ab + 2.0);
  const double scale = std::pow(0.5, ab + 1.0);
  nodes.resize(n);
  weights.resize(n);
  for (int k = 0; k < n; ++k) {
    nodes[k] = 0.5 * (eig.eigenvalues()(k) + 1.0);
    const double v0 = eig.eigenvectors()(0, k);
    weights[k] = mu0 * v0 * v0 * scale;
  }
}

}  // namespace

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  golub_welsch_jacobi(n, 0.0, 0.0, nodes, weights);
}

void gauss_jacobi_10(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  golub_welsch_jacobi(n, 1.0, 0.0, nodes, weights);
}

QuadratureRule quadrature_rule(int degree) {
  if (degree < 1 || degree > 10) {
    throw InvalidArgument("quadrature_rule: degree must lie in [1, 10], got " +
                          std::to_string(degree));
  }
  const int n = (degree + 2) / 2;  // 2n - 1 >= degree
  std::vector<double> u, wu, v, wv;
  gauss_jacobi_10(n, u, wu);
  gauss_legendre(n, v, wv);

  QuadratureRule rule;
  rule.degree = degree;
  rule.points.reserve(n * n);
  rule.weights.reserve(n * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      rule.points.emplace_back(u[i], (1.0 - u[i]) * v[j]);
      rule.weights.push_back(wu[i] * wv[j]);
    }
  }
  return rule;
}

}  // namespace lmles
