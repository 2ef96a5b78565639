#include "vtk.hpp"

#include <fstream>

#include "lmles/diagnostics/errors.hpp"
#include "lmles/error.hpp"

namespace lm {

void write_vtk(const lmles::SolverState& state, const std::filesystem::path& path) {
  const auto& vspace = state.velocity.space();
  const auto& mesh = vspace.mesh();
  const int nv = static_cast<int>(mesh.num_vertices());
  const int nodes = vspace.node_count();
  const int cells = static_cast<int>(mesh.num_cells());

  const lmles::FeField p = state.formulation == lmles::Formulation::Emac
                               ? lmles::recover_pressure(state.pressure, state.velocity, state.formulation)
                               : state.pressure;
  const auto& pc = p.coefficients();
  const auto& w = state.velocity.coefficients();

  std::ofstream out(path);
  if (!out) throw lmles::Error("cannot open " + path.string() + " for writing");
  out.precision(17);
  out << "# vtk DataFile Version 2.0\n"
      << "lm t=" << state.time << " step=" << state.step << "\n"
      << "ASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << nodes << " double\n";
  for (const auto& x : vspace.node_coordinates()) out << x.x() << ' ' << x.y() << " 0\n";

  out << "CELLS " << 4 * cells << ' ' << 16 * cells << '\n';
  for (int c = 0; c < cells; ++c) {
    // local P2 order: v0 v1 v2 e01 e12 e20
    const auto n = vspace.cell_nodes(c);
    out << "3 " << n[0] << ' ' << n[3] << ' ' << n[5] << '\n'
        << "3 " << n[3] << ' ' << n[1] << ' ' << n[4] << '\n'
        << "3 " << n[5] << ' ' << n[4] << ' ' << n[2] << '\n'
        << "3 " << n[3] << ' ' << n[4] << ' ' << n[5] << '\n';
  }
  out << "CELL_TYPES " << 4 * cells << '\n';
  for (int c = 0; c < 4 * cells; ++c) out << "5\n";

  out << "POINT_DATA " << nodes << "\nVECTORS velocity double\n";
  for (int i = 0; i < nodes; ++i) out << w[2 * i] << ' ' << w[2 * i + 1] << " 0\n";
  out << "SCALARS pressure double 1\nLOOKUP_TABLE default\n";
  for (int i = 0; i < nv; ++i) out << pc[i] << '\n';
  for (const auto& e : mesh.edges()) out << 0.5 * (pc[e[0]] + pc[e[1]]) << '\n';
  out << "SCALARS speed double 1\nLOOKUP_TABLE default\n";
  for (int i = 0; i < nodes; ++i) out << std::hypot(w[2 * i], w[2 * i + 1]) << '\n';
  out.flush();
  if (!out) throw lmles::Error("failed writing " + path.string());
}

}  // namespace lm
