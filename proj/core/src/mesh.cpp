#include "lmles/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

#include "lmles/error.hpp"

namespace lmles {

std::string_view to_string(BoundaryMarker marker) {
  switch (marker) {
    case BoundaryMarker::Wall:
      return "wall";
    case BoundaryMarker::Inflow:
      return "inflow";
    case BoundaryMarker::Outflow:
      return "outflow";
  }
  return "wall";
}

BoundaryMarker parse_marker(std::string_view text) {
  if (text == "wall") return BoundaryMarker::Wall;
  if (text == "inflow") return BoundaryMarker::Inflow;
  if (text == "outflow") return BoundaryMarker::Outflow;
  throw InvalidArgument("unknown boundary marker '" + std::string(text) + "'");
}

namespace {

EdgeKey make_key(int a, int b) { return a < b ? EdgeKey{a, b} : EdgeKey{b, a}; }

double signed_area(const Point& a, const Point& b, const Point& c) {
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
}

}  // namespace

Mesh::Mesh(std::vector<Point> vertices, std::vector<Triangle> cells,
           std::vector<BoundaryFacet> boundary)
    : vertices_(std::move(vertices)), cells_(std::move(cells)), boundary_(std::move(boundary)) {
  const int nv = static_cast<int>(vertices_.size());
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    for (int v : cells_[c]) {
      if (v < 0 || v >= nv) {
        throw ValidationError("cell " + std::to_string(c) + " references vertex " +
                              std::to_string(v) + " out of range");
      }
    }
  }
  for (std::size_t f = 0; f < boundary_.size(); ++f) {
    for (int v : boundary_[f].vertices) {
      if (v < 0 || v >= nv) {
        throw ValidationError("boundary facet " + std::to_string(f) + " references vertex " +
                              std::to_string(v) + " out of range");
      }
    }
  }
  build_edges();
  validate();
}

void Mesh::build_edges() {
  edges_.clear();
  edges_.reserve(3 * cells_.size());
  for (const auto& cell : cells_) {
    for (int k = 0; k < 3; ++k) edges_.push_back(make_key(cell[k], cell[(k + 1) % 3]));
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());

  cell_edges_.resize(cells_.size());
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    for (int k = 0; k < 3; ++k) {
      cell_edges_[c][k] = find_edge(cells_[c][k], cells_[c][(k + 1) % 3]);
    }
  }
  boundary_edges_.resize(boundary_.size());
  for (std::size_t f = 0; f < boundary_.size(); ++f) {
    boundary_edges_[f] = find_edge(boundary_[f].vertices[0], boundary_[f].vertices[1]);
  }
}

int Mesh::find_edge(int a, int b) const {
  const EdgeKey key = make_key(a, b);
  auto it = std::lower_bound(edges_.begin(), edges_.end(), key);
  if (it == edges_.end() || *it != key) return -1;
  return static_cast<int>(it - edges_.begin());
}

void Mesh::validate() const {
  if (cells_.empty()) throw ValidationError("mesh has no cells");

  for (std::size_t v = 0; v < vertices_.size(); ++v) {
    if (!vertices_[v].allFinite()) {
      throw ValidationError("vertex " + std::to_string(v) + " has non-finite coordinates");
    }
  }

  // Duplicate detection: sweep in x order, compare within the tolerance band.
  constexpr double tol = 1e-12;
  std::vector<int> order(vertices_.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return vertices_[a].x() < vertices_[b].x();
  });
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      const Point& p = vertices_[order[i]];
      const Point& q = vertices_[order[j]];
      if (q.x() - p.x() > tol) break;
      if (std::abs(q.y() - p.y()) <= tol) {
        throw ValidationError("duplicate vertices " + std::to_string(order[i]) + " and " +
                              std::to_string(order[j]));
      }
    }
  }

  for (std::size_t c = 0; c < cells_.size(); ++c) {
    const auto& t = cells_[c];
    if (signed_area(vertices_[t[0]], vertices_[t[1]], vertices_[t[2]]) <= 0.0) {
      throw ValidationError("cell " + std::to_string(c) + " is not positively oriented");
    }
  }

  std::vector<int> edge_cells(edges_.size(), 0);
  for (const auto& ce : cell_edges_) {
    for (int e : ce) ++edge_cells[e];
  }
  std::vector<int> facet_count(edges_.size(), 0);
  for (std::size_t f = 0; f < boundary_.size(); ++f) {
    const int e = boundary_edges_[f];
    if (e < 0) {
      throw ValidationError("boundary facet " + std::to_string(f) + " is not an edge of any cell");
    }
    if (++facet_count[e] > 1) {
      throw ValidationError("boundary facet " + std::to_string(f) + " is listed twice");
    }
  }
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const bool on_boundary = facet_count[e] == 1;
    const int expected = on_boundary ? 1 : 2;
    if (edge_cells[e] != expected) {
      throw ValidationError("edge (" + std::to_string(edges_[e][0]) + "," +
                            std::to_string(edges_[e][1]) + ") belongs to " +
                            std::to_string(edge_cells[e]) + " cells, expected " +
                            std::to_string(expected));
    }
  }

  const long euler = static_cast<long>(vertices_.size()) - static_cast<long>(edges_.size()) +
                     static_cast<long>(cells_.size());
  if (euler != 1) {
    throw ValidationError("Euler characteristic V - E + F = " + std::to_string(euler) +
                          ", expected 1 (simply connected domain)");
  }
}

double Mesh::cell_area(int c) const {
  const auto& t = cells_[c];
  return signed_area(vertices_[t[0]], vertices_[t[1]], vertices_[t[2]]);
}

double Mesh::cell_diameter(int c) const {
  const auto& t = cells_[c];
  double d = 0.0;
  for (int k = 0; k < 3; ++k) {
    d = std::max(d, (vertices_[t[k]] - vertices_[t[(k + 1) % 3]]).norm());
  }
  return d;
}

double Mesh::min_diameter() const {
  double h = cell_diameter(0);
  for (std::size_t c = 1; c < cells_.size(); ++c) h = std::min(h, cell_diameter(static_cast<int>(c)));
  return h;
}

double Mesh::max_diameter() const {
  double h = 0.0;
  for (std::size_t c = 0; c < cells_.size(); ++c) h = std::max(h, cell_diameter(static_cast<int>(c)));
  return h;
}

double Mesh::area() const {
  double a = 0.0;
  for (std::size_t c = 0; c < cells_.size(); ++c) a += cell_area(static_cast<int>(c));
  return a;
}

bool Mesh::has_marker(BoundaryMarker marker) const {
  return std::any_of(boundary_.begin(), boundary_.end(),
                     [&](const BoundaryFacet& f) { return f.marker == marker; });
}

namespace {

// Tensor-product grid over [xs]x[ys]; rectangles for which `removed` returns
// true are dropped. Facets with a single neighbour become boundary facets,
// classified by `classify` at their midpoint.
Mesh tensor_grid_mesh(const std::vector<double>& xs, const std::vector<double>& ys,
                      const std::function<bool(int, int)>& removed,
                      const std::function<BoundaryMarker(const Point&)>& classify) {
  const int nx = static_cast<int>(xs.size()) - 1;
  const int ny = static_cast<int>(ys.size()) - 1;
  const auto grid_id = [&](int i, int j) { return j * (nx + 1) + i; };

  std::vector<int> renumber((nx + 1) * (ny + 1), -1);
  std::vector<Point> vertices;
  std::vector<Triangle> cells;
  const auto vertex = [&](int i, int j) {
    int& id = renumber[grid_id(i, j)];
    if (id < 0) {
      id = static_cast<int>(vertices.size());
      vertices.emplace_back(xs[i], ys[j]);
    }
    return id;
  };

  // Vertices are numbered row by row so the numbering matches (i, j) order.
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      bool used = false;
      for (int dj = -1; dj <= 0 && !used; ++dj) {
        for (int di = -1; di <= 0 && !used; ++di) {
          const int ci = i + di;
          const int cj = j + dj;
          if (ci >= 0 && cj >= 0 && ci < nx && cj < ny && !removed(ci, cj)) used = true;
        }
      }
      if (used) vertex(i, j);
    }
  }

  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      if (removed(i, j)) continue;
      const int v00 = renumber[grid_id(i, j)];
      const int v10 = renumber[grid_id(i + 1, j)];
      const int v11 = renumber[grid_id(i + 1, j + 1)];
      const int v01 = renumber[grid_id(i, j + 1)];
      cells.push_back({v00, v10, v11});
      cells.push_back({v00, v11, v01});
    }
  }

  // Boundary facets: count cell incidences per edge.
  std::vector<std::pair<EdgeKey, int>> incidences;
  incidences.reserve(cells.size() * 3);
  for (const auto& t : cells) {
    for (int k = 0; k < 3; ++k) {
      incidences.emplace_back(make_key(t[k], t[(k + 1) % 3]), 0);
    }
  }
  std::sort(incidences.begin(), incidences.end());
  std::vector<BoundaryFacet> boundary;
  for (std::size_t k = 0; k < incidences.size();) {
    std::size_t next = k + 1;
    while (next < incidences.size() && incidences[next].first == incidences[k].first) ++next;
    if (next - k == 1) {
      const EdgeKey& e = incidences[k].first;
      const Point mid = 0.5 * (vertices[e[0]] + vertices[e[1]]);
      boundary.push_back({e, classify(mid)});
    }
    k = next;
  }
  return Mesh(std::move(vertices), std::move(cells), std::move(boundary));
}

// Grid coordinates on [a, b] equidistributing 1/spacing(x), so consecutive
// points are at most about spacing(x) apart and `a`, `b` are hit exactly.
std::size_t graded_count(double a, double b, const std::function<double(double)>& spacing,
                         std::vector<double>* cumulative) {
  constexpr int samples = 2000;
  std::vector<double> cum(samples + 1, 0.0);
  for (int k = 0; k < samples; ++k) {
    const double x0 = a + (b - a) * k / samples;
    const double x1 = a + (b - a) * (k + 1) / samples;
    cum[k + 1] = cum[k] + 0.5 * (x1 - x0) * (1.0 / spacing(x0) + 1.0 / spacing(x1));
  }
  if (cumulative) *cumulative = cum;
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(cum.back() - 1e-9)));
}

void append_graded(double a, double b, const std::function<double(double)>& spacing,
                   std::vector<double>& out) {
  std::vector<double> cum;
  const std::size_t n = graded_count(a, b, spacing, &cum);
  const int samples = static_cast<int>(cum.size()) - 1;
  if (out.empty()) out.push_back(a);
  for (std::size_t k = 1; k < n; ++k) {
    const double target = cum.back() * static_cast<double>(k) / static_cast<double>(n);
    auto it = std::lower_bound(cum.begin(), cum.end(), target);
    const int hi = static_cast<int>(it - cum.begin());
    const int lo = hi - 1;
    const double frac = (target - cum[lo]) / (cum[hi] - cum[lo]);
    out.push_back(a + (b - a) * (lo + frac) / samples);
  }
  out.push_back(b);
}

}  // namespace

Mesh unit_square_mesh(int m) {
  if (m < 1) throw InvalidArgument("unit_square_mesh: m must be >= 1, got " + std::to_string(m));
  std::vector<double> coords(m + 1);
  for (int i = 0; i <= m; ++i) coords[i] = static_cast<double>(i) / m;
  return tensor_grid_mesh(
      coords, coords, [](int, int) { return false; },
      [](const Point&) { return BoundaryMarker::Wall; });
}

Mesh step_channel_mesh(double h_target, const StepChannelOptions& options) {
  if (!(h_target > 0.0) || h_target > 1.0) {
    throw InvalidArgument("step_channel_mesh: h_target must lie in (0, 1]");
  }
  const double s0 = options.step_start;
  const double s1 = options.step_start + options.step_size;
  const double a = options.step_size;
  const double fine = std::clamp(options.refinement, 0.05, 1.0);

  // Spacing shrinks to fine * h_target within one step size of the step and
  // relaxes linearly back to h_target over the next two.
  const auto ramp = [&](double dist) {
    if (dist <= a) return fine * h_target;
    if (dist >= 3.0 * a) return h_target;
    return h_target * (fine + (1.0 - fine) * (dist - a) / (2.0 * a));
  };
  const std::function<double(double)> hx = [&](double x) {
    const double dist = x < s0 ? s0 - x : (x > s1 ? x - s1 : 0.0);
    return ramp(dist);
  };
  const std::function<double(double)> hy = [&](double y) {
    return ramp(y > a ? y - a : 0.0);
  };

  const std::vector<double> xbreaks{0.0, s0, s1, options.length};
  const std::vector<double> ybreaks{0.0, a, options.height};

  std::size_t nx = 0;
  for (std::size_t k = 0; k + 1 < xbreaks.size(); ++k) {
    nx += graded_count(xbreaks[k], xbreaks[k + 1], hx, nullptr);
  }
  std::size_t ny = 0;
  for (std::size_t k = 0; k + 1 < ybreaks.size(); ++k) {
    ny += graded_count(ybreaks[k], ybreaks[k + 1], hy, nullptr);
  }
  if (2 * nx * ny > options.max_cells) {
    throw ResourceError("step_channel_mesh: h_target " + std::to_string(h_target) +
                        " needs about " + std::to_string(2 * nx * ny) +
                        " cells, above the ceiling of " + std::to_string(options.max_cells));
  }

  std::vector<double> xs;
  for (std::size_t k = 0; k + 1 < xbreaks.size(); ++k) append_graded(xbreaks[k], xbreaks[k + 1], hx, xs);
  std::vector<double> ys;
  for (std::size_t k = 0; k + 1 < ybreaks.size(); ++k) append_graded(ybreaks[k], ybreaks[k + 1], hy, ys);

  const double tol = 1e-9;
  const double length = options.length;
  return tensor_grid_mesh(
      xs, ys,
      [&](int i, int j) {
        return xs[i] >= s0 - tol && xs[i + 1] <= s1 + tol && ys[j + 1] <= a + tol;
      },
      [&](const Point& mid) {
        if (mid.x() < tol) return BoundaryMarker::Inflow;
        if (mid.x() > length - tol) return BoundaryMarker::Outflow;
        return BoundaryMarker::Wall;
      });
}

}  // namespace lmles
