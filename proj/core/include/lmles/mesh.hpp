#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace lmles {

using Point = Eigen::Vector2d;
using Triangle = std::array<int, 3>;
using EdgeKey = std::array<int, 2>;

enum class BoundaryMarker : std::uint8_t { Wall, Inflow, Outflow };

std::string_view to_string(BoundaryMarker marker);
BoundaryMarker parse_marker(std::string_view text);

struct BoundaryFacet {
  EdgeKey vertices;
  BoundaryMarker marker;
};

/// Conforming triangulation of a polygonal 2D domain.
///
/// Construction validates: positive orientation of every cell, finite
/// coordinates, no duplicate vertices, boundary facets matching the edges that
/// bound exactly one cell, every interior edge shared by exactly two cells and
/// V - E + F = 1. Immutable afterwards.
class Mesh {
 public:
  Mesh(std::vector<Point> vertices, std::vector<Triangle> cells,
       std::vector<BoundaryFacet> boundary);

  const std::vector<Point>& vertices() const noexcept { return vertices_; }
  const std::vector<Triangle>& cells() const noexcept { return cells_; }
  const std::vector<BoundaryFacet>& boundary() const noexcept { return boundary_; }

  /// Unique edges (a < b), sorted lexicographically.
  const std::vector<EdgeKey>& edges() const noexcept { return edges_; }

  /// Edge indices of cell c, local edge k joins local vertices k and (k+1)%3.
  const std::array<int, 3>& cell_edges(int c) const { return cell_edges_[c]; }

  /// Edge index of every boundary facet, aligned with boundary().
  const std::vector<int>& boundary_edges() const noexcept { return boundary_edges_; }

  std::size_t num_vertices() const noexcept { return vertices_.size(); }
  std::size_t num_cells() const noexcept { return cells_.size(); }
  std::size_t num_edges() const noexcept { return edges_.size(); }

  double cell_area(int c) const;
  double cell_diameter(int c) const;
  double min_diameter() const;
  double max_diameter() const;
  double area() const;

  bool has_marker(BoundaryMarker marker) const;

  /// Index of the edge (a, b) in edges(), or -1.
  int find_edge(int a, int b) const;

 private:
  void build_edges();
  void validate() const;

  std::vector<Point> vertices_;
  std::vector<Triangle> cells_;
  std::vector<BoundaryFacet> boundary_;
  std::vector<EdgeKey> edges_;
  std::vector<std::array<int, 3>> cell_edges_;
  std::vector<int> boundary_edges_;
};

/// Uniform mesh of (0,1)^2 with m subdivisions per side. Every square is
/// split along its lower-left to upper-right diagonal; all facets are Wall.
Mesh unit_square_mesh(int m);

struct StepChannelOptions {
  double length = 40.0;
  double height = 10.0;
  double step_start = 5.0;
  double step_size = 1.0;
  /// Spacing factor applied close to the step (1 = no refinement).
  double refinement = 0.5;
  std::size_t max_cells = 2'000'000;
};

/// Channel [0,L]x[0,H] minus the square step [s, s+a]x[0,a]. Inflow on x = 0,
/// Outflow on x = L, Wall elsewhere. Built from a tensor grid graded towards
/// the step corners, so every cell diameter is at most sqrt(2) * h_target.
Mesh step_channel_mesh(double h_target, const StepChannelOptions& options = {});

void write_mesh(const Mesh& mesh, std::ostream& out);
Mesh read_mesh(std::istream& in);
void save_mesh(const Mesh& mesh, const std::filesystem::path& path);
Mesh load_mesh(const std::filesystem::path& path);

}  // namespace lmles
