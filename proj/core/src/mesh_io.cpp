#include <charconv>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>

#include "lmles/error.hpp"
#include "lmles/mesh.hpp"

namespace lmles {

void write_mesh(const Mesh& mesh, std::ostream& out) {
  out << "lmmesh 1\n";
  out << "vertices " << mesh.num_vertices() << '\n';
  out << std::setprecision(17);
  for (const Point& p : mesh.vertices()) out << p.x() << ' ' << p.y() << '\n';
  out << "cells " << mesh.num_cells() << '\n';
  for (const auto& t : mesh.cells()) out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  out << "boundary " << mesh.boundary().size() << '\n';
  for (const auto& f : mesh.boundary()) {
    out << f.vertices[0] << ' ' << f.vertices[1] << ' ' << to_string(f.marker) << '\n';
  }
}

namespace {

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  // Next non-blank line split on whitespace.
  std::vector<std::string> next(std::string_view expecting) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      std::istringstream ss(line);
      std::vector<std::string> tokens;
      for (std::string tok; ss >> tok;) tokens.push_back(tok);
      if (!tokens.empty()) return tokens;
    }
    throw ParseError("unexpected end of file, expecting " + std::string(expecting), line_no_ + 1);
  }

  std::size_t line() const { return line_no_; }

 private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

template <typename T>
T parse_number(const std::string& tok, std::size_t line) {
  T value{};
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw ParseError("cannot parse '" + tok + "' as a number", line);
  }
  return value;
}

std::size_t read_section(LineReader& reader, std::string_view name) {
  auto tokens = reader.next(name);
  if (tokens.size() != 2 || tokens[0] != name) {
    throw ParseError("expected '" + std::string(name) + " <count>'", reader.line());
  }
  const long count = parse_number<long>(tokens[1], reader.line());
  if (count < 0) throw ParseError("negative count", reader.line());
  return static_cast<std::size_t>(count);
}

}  // namespace

Mesh read_mesh(std::istream& in) {
  LineReader reader(in);
  {
    auto header = reader.next("header");
    if (header.size() != 2 || header[0] != "lmmesh" || header[1] != "1") {
      throw ParseError("expected header 'lmmesh 1'", reader.line());
    }
  }

  const std::size_t nv = read_section(reader, "vertices");
  std::vector<Point> vertices(nv);
  for (std::size_t i = 0; i < nv; ++i) {
    auto t = reader.next("vertex coordinates");
    if (t.size() != 2) throw ParseError("vertex line needs 2 values", reader.line());
    vertices[i] = Point(parse_number<double>(t[0], reader.line()),
                        parse_number<double>(t[1], reader.line()));
  }

  const auto vertex_index = [&](const std::string& tok) {
    const long v = parse_number<long>(tok, reader.line());
    if (v < 0 || static_cast<std::size_t>(v) >= nv) {
      throw ParseError("vertex index " + tok + " out of range [0, " + std::to_string(nv) + ")",
                       reader.line());
    }
    return static_cast<int>(v);
  };

  const std::size_t nc = read_section(reader, "cells");
  std::vector<Triangle> cells(nc);
  for (std::size_t c = 0; c < nc; ++c) {
    auto t = reader.next("cell indices");
    if (t.size() != 3) throw ParseError("cell line needs 3 indices", reader.line());
    cells[c] = {vertex_index(t[0]), vertex_index(t[1]), vertex_index(t[2])};
  }

  const std::size_t nb = read_section(reader, "boundary");
  std::vector<BoundaryFacet> boundary(nb);
  for (std::size_t f = 0; f < nb; ++f) {
    auto t = reader.next("boundary facet");
    if (t.size() != 3) throw ParseError("boundary line needs 'i j marker'", reader.line());
    BoundaryMarker marker;
    try {
      marker = parse_marker(t[2]);
    } catch (const InvalidArgument& e) {
      throw ParseError(e.what(), reader.line());
    }
    boundary[f] = {{vertex_index(t[0]), vertex_index(t[1])}, marker};
  }

  return Mesh(std::move(vertices), std::move(cells), std::move(boundary));
}

void save_mesh(const Mesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  write_mesh(mesh, out);
  if (!out) throw Error("failed writing " + path.string());
}

Mesh load_mesh(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return read_mesh(in);
}

}  // namespace lmles
