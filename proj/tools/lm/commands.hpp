#pragma once

#include <iosfwd>
#include <memory>
#include <span>

#include "lmles/mesh.hpp"
#include "lmles/stepper/time_stepper.hpp"
#include "run_config.hpp"

namespace lm {

enum ExitCode : int {
  kOk = 0,
  kStepFailure = 1,  ///< a time step was rejected; partial outputs are kept
  kBadConfig = 2,
  kIoError = 3,
};

struct TaylorGreenResult {
  int m = 0;
  double l2t_h1 = 0.0;
  double linf_l2 = 0.0;
  double max_div_residual = 0.0;
  lmles::SolverState final_state;
};

/// One vortex run on unit_square_mesh(m) with Dirichlet data from the closed
/// form and f = 0; errors are accumulated over every time level.
TaylorGreenResult run_taylor_green(const RunConfig& config, int m,
                                   std::span<const lmles::Observer> observers = {});

std::shared_ptr<const lmles::Mesh> step_mesh(const RunConfig& config);
lmles::BoundaryConditions step_boundary_conditions(const RunConfig& config);
/// Channel run from rest with the parabolic inflow at full strength.
lmles::SolverState run_step(const RunConfig& config, std::span<const lmles::Observer> observers = {});

int cmd_taylor_green(const RunConfig& config, std::ostream& log);
int cmd_convergence(const RunConfig& config, std::ostream& log);
int cmd_step(const RunConfig& config, std::ostream& log);

/// Validates, writes <out>/config.resolved, dispatches on the benchmark and
/// maps errors to exit codes.
int run(const RunConfig& config, std::ostream& log, std::ostream& err);

}  // namespace lm
