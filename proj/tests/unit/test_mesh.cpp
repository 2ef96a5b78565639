#include <cmath>
#include <filesystem>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "lmles/error.hpp"
#include "lmles/mesh.hpp"

using namespace lmles;

namespace {

// Brute-force edge count: every unordered vertex pair adjacent in some cell.
std::size_t enumerate_edges(const Mesh& mesh) {
  std::set<std::pair<int, int>> seen;
  for (const auto& c : mesh.cells()) {
    for (int k = 0; k < 3; ++k) {
      const int a = c[k], b = c[(k + 1) % 3];
      seen.insert({std::min(a, b), std::max(a, b)});
    }
  }
  return seen.size();
}

}  // namespace

TEST(UnitSquareMesh, Counts) {
  const Mesh m1 = unit_square_mesh(1);
  EXPECT_EQ(m1.num_vertices(), 4u);
  EXPECT_EQ(m1.num_cells(), 2u);
  EXPECT_EQ(m1.boundary().size(), 4u);

  const Mesh m16 = unit_square_mesh(16);
  EXPECT_EQ(m16.num_vertices(), 289u);
  EXPECT_EQ(m16.num_cells(), 512u);
  EXPECT_EQ(enumerate_edges(m16), 800u);
  EXPECT_EQ(m16.num_edges(), 800u);
  EXPECT_EQ(289 - 800 + 512, 1);
}

TEST(UnitSquareMesh, InvariantsForManyM) {
  for (int m = 1; m <= 32; ++m) {
    const Mesh mesh = unit_square_mesh(m);
    EXPECT_EQ(mesh.num_vertices(), static_cast<std::size_t>((m + 1) * (m + 1)));
    EXPECT_EQ(mesh.num_cells(), static_cast<std::size_t>(2 * m * m));
    EXPECT_EQ(mesh.num_edges(), enumerate_edges(mesh));
    EXPECT_EQ(static_cast<long>(mesh.num_vertices()) - static_cast<long>(mesh.num_edges()) +
                  static_cast<long>(mesh.num_cells()),
              1);
    EXPECT_NEAR(mesh.area(), 1.0, 1e-12);
    EXPECT_NEAR(mesh.min_diameter(), std::sqrt(2.0) / m, 1e-14);
    for (const auto& f : mesh.boundary()) EXPECT_EQ(f.marker, BoundaryMarker::Wall);
  }
  EXPECT_THROW(unit_square_mesh(0), InvalidArgument);
}

TEST(StepChannelMesh, GeometryAndMarkers) {
  const Mesh mesh = step_channel_mesh(0.5);
  EXPECT_NEAR(mesh.area(), 399.0, 1e-9);
  EXPECT_LE(mesh.max_diameter(), 2 * 0.5);
  EXPECT_EQ(static_cast<long>(mesh.num_vertices()) - static_cast<long>(mesh.num_edges()) +
                static_cast<long>(mesh.num_cells()),
            1);
  bool inflow = false, outflow = false;
  for (const auto& f : mesh.boundary()) {
    const Point& a = mesh.vertices()[f.vertices[0]];
    const Point& b = mesh.vertices()[f.vertices[1]];
    if (a.x() == 0.0 && b.x() == 0.0) {
      EXPECT_EQ(f.marker, BoundaryMarker::Inflow);
      inflow = true;
    } else if (a.x() == 40.0 && b.x() == 40.0) {
      EXPECT_EQ(f.marker, BoundaryMarker::Outflow);
      outflow = true;
    } else {
      EXPECT_EQ(f.marker, BoundaryMarker::Wall);
    }
  }
  EXPECT_TRUE(inflow);
  EXPECT_TRUE(outflow);
}

TEST(StepChannelMesh, DefaultResolution) {
  // The channel benchmark needs at least 4,000 vertices; h = 0.32 is its default.
  const Mesh mesh = step_channel_mesh(0.32);
  EXPECT_GE(mesh.num_vertices(), 4000u);
  EXPECT_LT(mesh.num_vertices(), 20000u);
  EXPECT_NEAR(mesh.area(), 399.0, 1e-9);
}

TEST(StepChannelMesh, Rejections) {
  EXPECT_THROW(step_channel_mesh(0.0), InvalidArgument);
  EXPECT_THROW(step_channel_mesh(1.5), InvalidArgument);
  StepChannelOptions opts;
  opts.max_cells = 1000;
  EXPECT_THROW(step_channel_mesh(0.1, opts), ResourceError);
}

TEST(MeshIo, RoundTrip) {
  const Mesh mesh = unit_square_mesh(2);
  const auto path = std::filesystem::temp_directory_path() / "lmles_roundtrip.mesh";
  save_mesh(mesh, path);
  const Mesh back = load_mesh(path);
  std::filesystem::remove(path);
  ASSERT_EQ(back.num_vertices(), mesh.num_vertices());
  for (std::size_t i = 0; i < mesh.num_vertices(); ++i) {
    EXPECT_EQ(back.vertices()[i], mesh.vertices()[i]);
  }
  EXPECT_EQ(back.cells(), mesh.cells());
  ASSERT_EQ(back.boundary().size(), mesh.boundary().size());
  for (std::size_t i = 0; i < mesh.boundary().size(); ++i) {
    EXPECT_EQ(back.boundary()[i].vertices, mesh.boundary()[i].vertices);
    EXPECT_EQ(back.boundary()[i].marker, mesh.boundary()[i].marker);
  }
}

TEST(MeshIo, CoordinatesSurviveText) {
  const Mesh mesh = step_channel_mesh(0.9);
  std::stringstream s;
  write_mesh(mesh, s);
  const Mesh back = read_mesh(s);
  for (std::size_t i = 0; i < mesh.num_vertices(); ++i) {
    EXPECT_EQ(back.vertices()[i], mesh.vertices()[i]);
  }
}

TEST(MeshIo, NegativeOrientationIsValidationError) {
  std::istringstream in(
      "lmmesh 1\nvertices 3\n0 0\n1 0\n0 1\ncells 1\n0 2 1\nboundary 3\n0 1 wall\n1 2 wall\n2 0 "
      "wall\n");
  EXPECT_THROW(read_mesh(in), ValidationError);
}

TEST(MeshIo, DanglingIndexNamesLine) {
  std::istringstream in(
      "lmmesh 1\nvertices 3\n0 0\n1 0\n0 1\ncells 1\n0 1 7\nboundary 3\n0 1 wall\n1 2 wall\n2 0 "
      "wall\n");
  try {
    read_mesh(in);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 7u);
  }
}

TEST(MeshIo, BadHeader) {
  std::istringstream in("mesh 2\n");
  EXPECT_THROW(read_mesh(in), ParseError);
}

TEST(Mesh, MarkerNames) {
  EXPECT_EQ(parse_marker("inflow"), BoundaryMarker::Inflow);
  EXPECT_EQ(to_string(BoundaryMarker::Outflow), "outflow");
  EXPECT_THROW(parse_marker("slip"), InvalidArgument);
}
