#include "lmles/fem/function_space.hpp"

#include <algorithm>

#include "lmles/error.hpp"

namespace lmles {

FunctionSpace::FunctionSpace(std::shared_ptr<const Mesh> mesh, Family family)
    : mesh_(std::move(mesh)), family_(family) {
  if (!mesh_) throw InvalidArgument("FunctionSpace: null mesh");
  const Mesh& m = *mesh_;
  const int nv = static_cast<int>(m.num_vertices());
  const bool quadratic = family_ != Family::ScalarP1;

  node_coordinates_ = m.vertices();
  if (quadratic) {
    node_coordinates_.reserve(m.num_vertices() + m.num_edges());
    for (const auto& e : m.edges()) {
      node_coordinates_.push_back(0.5 * (m.vertices()[e[0]] + m.vertices()[e[1]]));
    }
  }

  const int npc = nodes_per_cell();
  const int nc = components();
  cell_nodes_.resize(m.num_cells() * npc);
  cell_dofs_.resize(m.num_cells() * npc * nc);
  for (std::size_t c = 0; c < m.num_cells(); ++c) {
    int* nodes = cell_nodes_.data() + c * npc;
    const auto& tri = m.cells()[c];
    nodes[0] = tri[0];
    nodes[1] = tri[1];
    nodes[2] = tri[2];
    if (quadratic) {
      const auto& ce = m.cell_edges(static_cast<int>(c));
      for (int k = 0; k < 3; ++k) nodes[3 + k] = nv + ce[k];
    }
    int* dofs = cell_dofs_.data() + c * npc * nc;
    for (int a = 0; a < npc; ++a) {
      for (int i = 0; i < nc; ++i) dofs[a * nc + i] = nodes[a] * nc + i;
    }
  }
}

std::vector<int> FunctionSpace::boundary_nodes(BoundaryMarker marker) const {
  const Mesh& m = *mesh_;
  const int nv = static_cast<int>(m.num_vertices());
  std::vector<int> nodes;
  for (std::size_t f = 0; f < m.boundary().size(); ++f) {
    const auto& facet = m.boundary()[f];
    if (facet.marker != marker) continue;
    nodes.push_back(facet.vertices[0]);
    nodes.push_back(facet.vertices[1]);
    if (family_ != Family::ScalarP1) nodes.push_back(nv + m.boundary_edges()[f]);
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  return nodes;
}

std::vector<int> FunctionSpace::boundary_dofs(BoundaryMarker marker,
                                              std::optional<int> component) const {
  const int nc = components();
  if (component && (*component < 0 || *component >= nc)) {
    throw InvalidArgument("boundary_dofs: component out of range");
  }
  std::vector<int> dofs;
  for (int node : boundary_nodes(marker)) {
    for (int i = 0; i < nc; ++i) {
      if (!component || *component == i) dofs.push_back(node * nc + i);
    }
  }
  return dofs;
}

std::shared_ptr<const FunctionSpace> build_space(std::shared_ptr<const Mesh> mesh, Family family) {
  return std::make_shared<const FunctionSpace>(std::move(mesh), family);
}

}  // namespace lmles
