#include "lmles/fem/reference_element.hpp"

#include "lmles/error.hpp"

namespace lmles {

std::string_view to_string(Family family) {
  switch (family) {
    case Family::ScalarP1:
      return "ScalarP1";
    case Family::ScalarP2:
      return "ScalarP2";
    case Family::VectorP2:
      return "VectorP2";
  }
  return "?";
}

BasisValues reference_basis_unchecked(Family family, const Eigen::Vector2d& p) {
  const double l0 = 1.0 - p.x() - p.y();
  const double l1 = p.x();
  const double l2 = p.y();
  const Eigen::Vector2d g0(-1.0, -1.0);
  const Eigen::Vector2d g1(1.0, 0.0);
  const Eigen::Vector2d g2(0.0, 1.0);

  BasisValues b;
  if (family == Family::ScalarP1) {
    b.count = 3;
    b.values = {l0, l1, l2, 0.0, 0.0, 0.0};
    b.gradients[0] = g0;
    b.gradients[1] = g1;
    b.gradients[2] = g2;
    for (int k = 3; k < 6; ++k) b.gradients[k].setZero();
    return b;
  }

  b.count = 6;
  b.values[0] = l0 * (2.0 * l0 - 1.0);
  b.values[1] = l1 * (2.0 * l1 - 1.0);
  b.values[2] = l2 * (2.0 * l2 - 1.0);
  b.values[3] = 4.0 * l0 * l1;
  b.values[4] = 4.0 * l1 * l2;
  b.values[5] = 4.0 * l2 * l0;
  b.gradients[0] = (4.0 * l0 - 1.0) * g0;
  b.gradients[1] = (4.0 * l1 - 1.0) * g1;
  b.gradients[2] = (4.0 * l2 - 1.0) * g2;
  b.gradients[3] = 4.0 * (l0 * g1 + l1 * g0);
  b.gradients[4] = 4.0 * (l1 * g2 + l2 * g1);
  b.gradients[5] = 4.0 * (l2 * g0 + l0 * g2);
  return b;
}

BasisValues reference_basis(Family family, const Eigen::Vector2d& p) {
  constexpr double tol = 1e-12;
  if (!p.allFinite() || p.x() < -tol || p.y() < -tol || p.x() + p.y() > 1.0 + tol) {
    throw InvalidArgument("reference_basis: point outside the reference triangle");
  }
  return reference_basis_unchecked(family, p);
}

std::array<Eigen::Vector2d, 6> reference_nodes(Family family) {
  std::array<Eigen::Vector2d, 6> nodes;
  nodes[0] = {0.0, 0.0};
  nodes[1] = {1.0, 0.0};
  nodes[2] = {0.0, 1.0};
  if (family == Family::ScalarP1) {
    for (int k = 3; k < 6; ++k) nodes[k].setConstant(0.0);
  } else {
    nodes[3] = {0.5, 0.0};
    nodes[4] = {0.5, 0.5};
    nodes[5] = {0.0, 0.5};
  }
  return nodes;
}

}  // namespace lmles
