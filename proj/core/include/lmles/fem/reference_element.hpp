#pragma once

#include <array>
#include <cstdint>
#include <string_view>

#include <Eigen/Core>

namespace lmles {

enum class Family : std::uint8_t { ScalarP1, ScalarP2, VectorP2 };

std::string_view to_string(Family family);

/// Scalar Lagrange nodes on one cell (3 for P1, 6 for P2).
constexpr int nodes_per_cell(Family family) { return family == Family::ScalarP1 ? 3 : 6; }
constexpr int components(Family family) { return family == Family::VectorP2 ? 2 : 1; }

/// Values and reference gradients of the scalar Lagrange basis at one point.
/// P2 local order: vertices 0, 1, 2 then edge midpoints (0,1), (1,2), (2,0).
/// For VectorP2 the scalar P2 basis is returned; it is replicated per component.
struct BasisValues {
  int count = 0;
  std::array<double, 6> values{};
  std::array<Eigen::Vector2d, 6> gradients{};
};

BasisValues reference_basis(Family family, const Eigen::Vector2d& local_point);

/// Same as reference_basis without the inside-triangle check.
BasisValues reference_basis_unchecked(Family family, const Eigen::Vector2d& local_point);

/// Local coordinates of the scalar Lagrange nodes.
std::array<Eigen::Vector2d, 6> reference_nodes(Family family);

}  // namespace lmles
