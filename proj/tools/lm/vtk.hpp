#pragma once

#include <filesystem>

#include "lmles/stepper/time_stepper.hpp"

namespace lm {

/// Legacy VTK (2.0, ASCII) unstructured grid. The P2 velocity is shown on the
/// once-refined P1 mesh (each triangle split into four, points = vertices
/// followed by edge midpoints); the P1 pressure is interpolated linearly onto
/// the midpoints. EMAC states are converted to the kinematic pressure.
void write_vtk(const lmles::SolverState& state, const std::filesystem::path& path);

}  // namespace lm
