#pragma once

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "lmles/fem/reference_element.hpp"
#include "lmles/mesh.hpp"

namespace lmles {

/// Lagrange space over a mesh.
///
/// Scalar nodes are numbered vertices first, then edges in Mesh::edges()
/// order. Vector dofs are interleaved per node: dof = 2 * node + component.
class FunctionSpace {
 public:
  FunctionSpace(std::shared_ptr<const Mesh> mesh, Family family);

  const Mesh& mesh() const noexcept { return *mesh_; }
  const std::shared_ptr<const Mesh>& mesh_ptr() const noexcept { return mesh_; }
  Family family() const noexcept { return family_; }
  int components() const noexcept { return lmles::components(family_); }
  int nodes_per_cell() const noexcept { return lmles::nodes_per_cell(family_); }
  int dofs_per_cell() const noexcept { return nodes_per_cell() * components(); }

  int node_count() const noexcept { return static_cast<int>(node_coordinates_.size()); }
  int dof_count() const noexcept { return node_count() * components(); }

  std::span<const int> cell_nodes(int cell) const {
    return {cell_nodes_.data() + static_cast<std::size_t>(cell) * nodes_per_cell(),
            static_cast<std::size_t>(nodes_per_cell())};
  }
  /// Global dofs of a cell in local order (node-major, component-minor).
  std::span<const int> cell_dofs(int cell) const {
    return {cell_dofs_.data() + static_cast<std::size_t>(cell) * dofs_per_cell(),
            static_cast<std::size_t>(dofs_per_cell())};
  }

  const std::vector<Point>& node_coordinates() const noexcept { return node_coordinates_; }

  /// Sorted nodes lying on facets carrying `marker`.
  std::vector<int> boundary_nodes(BoundaryMarker marker) const;
  /// Sorted dofs on facets carrying `marker`; all components unless one is given.
  std::vector<int> boundary_dofs(BoundaryMarker marker,
                                 std::optional<int> component = std::nullopt) const;

  bool same_mesh(const FunctionSpace& other) const noexcept { return mesh_ == other.mesh_; }

 private:
  std::shared_ptr<const Mesh> mesh_;
  Family family_;
  std::vector<int> cell_nodes_;
  std::vector<int> cell_dofs_;
  std::vector<Point> node_coordinates_;
};

std::shared_ptr<const FunctionSpace> build_space(std::shared_ptr<const Mesh> mesh, Family family);

}  // namespace lmles
