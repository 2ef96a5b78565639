#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "lmles/diagnostics/quantities.hpp"
#include "lmles/fem/fe_field.hpp"
#include "lmles/forms/form_assembler.hpp"
#include "lmles/forms/model_params.hpp"
#include "lmles/linalg/saddle_point_solver.hpp"
#include "lmles/stepper/boundary_conditions.hpp"

namespace lmles {

struct TimeConfig {
  double dt = 5e-4;
  double t_end = 0.1;
  /// Absolute bound on the 2-norm of the algebraic residual.
  double nonlinear_tol = 1e-10;
  int nonlinear_max_iters = 25;
  bool picard_fallback = true;
  int picard_max_iters = 50;
  double linear_tol = 1e-10;
  int threads = 1;
  /// Keep the factorized Newton matrix across iterations and steps and
  /// refresh it only when the residual stops contracting quickly. Converges
  /// to the same tolerance with far fewer factorizations.
  bool reuse_jacobian = false;

  /// Throws InvalidArgument on violated invariants, including a t_end that is
  /// not a whole number of steps.
  void validate() const;
  int num_steps() const;
  /// t^n, exact at n = num_steps().
  double time_of(int n) const;
};

struct SolverState {
  int step = 0;
  double time = 0.0;
  FeField velocity;
  /// P for EMAC, p for SKEW; shifted to zero mean on enclosed domains.
  FeField pressure;
  Formulation formulation = Formulation::Emac;
  QuantityLog log;
};

struct StepReport {
  int newton_iterations = 0;
  int picard_iterations = 0;
  bool used_picard = false;
  int factorizations = 0;
  std::vector<double> residual_history;
  double div_residual = 0.0;
};

using Forcing = std::function<Eigen::Vector2d(const Point&, double t)>;
/// Called with read-only snapshots at step 0 and after every accepted step.
using Observer = std::function<void(int step, double time, const SolverState&)>;
using WarningSink = std::function<void(const std::string&)>;

/// Residual and derivative of one Crank-Nicolson step with respect to the
/// unknown x = [w^{n+1}; p^{n+1}].
struct StepSystem {
  Vector residual;
  SparseMatrix jacobian;
};

/// Crank-Nicolson integrator for the SKEW and EMAC schemes.
///
/// Constant operators, the coupled sparsity pattern and the factorization's
/// symbolic analysis are built once and reused for every step.
class TimeStepper {
 public:
  TimeStepper(std::shared_ptr<const Mesh> mesh, ModelParams params, BoundaryConditions bcs,
              TimeConfig config, Forcing forcing = {}, WarningSink warn = {});
  ~TimeStepper();

  const FunctionSpace& velocity_space() const { return assembler_->velocity_space(); }
  const FunctionSpace& pressure_space() const { return assembler_->pressure_space(); }
  const FormAssembler& assembler() const { return *assembler_; }
  const ModelParams& params() const noexcept { return params_; }
  const TimeConfig& config() const noexcept { return config_; }
  bool pressure_pinned() const noexcept { return pinned_; }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

  /// State at t = 0 from nodal interpolation of `w0`; w0 is used as given,
  /// boundary values included.
  SolverState initial_state(const VectorFunction& w0) const;
  SolverState initial_state(FeField w0) const;

  /// Discretely divergence-free field closest to `u` in L2 that takes the
  /// boundary values at time t.
  FeField project(const FeField& u, double t = 0.0) const;

  /// Step system from `state` evaluated at the candidate (w, p). Rows of
  /// constrained dofs are identity rows whose residual is w_i - g_i.
  StepSystem build_system(const SolverState& state, const FeField& w, const FeField& p,
                          Linearization linearization = Linearization::Newton) const;
  Vector residual(const SolverState& state, const FeField& w, const FeField& p) const;

  /// One accepted step; throws StepFailure when every solver gives up.
  SolverState advance(const SolverState& state, StepReport* report = nullptr);

  /// Runs to t_end, logging quantities and calling observers.
  SolverState run(SolverState state, std::span<const Observer> observers = {});

  /// max_q |(div w, q)| over the pressure basis.
  double divergence_residual(const FeField& w) const;

  /// Velocity dofs carrying a prescribed value (Dirichlet and no-penetration).
  const std::vector<int>& constrained_dofs() const noexcept { return constrained_; }

 private:
  struct Blocks;

  void apply_constraints(Vector& w, double t) const;
  Vector boundary_values(double t) const;
  double fill_residual(const SolverState& state, const Vector& w, const Vector& p,
                       const Vector& nonlinear_residual, const Vector& load,
                       Vector& residual) const;
  void fill_jacobian(const SparseMatrix& nonlinear_jacobian, SparseMatrix& jacobian) const;
  Vector load_at(double t) const;
  void zero_mean(Vector& p) const;
  bool solve_nonlinear(const SolverState& state, Linearization linearization, int max_iters,
                       Vector& w, Vector& p, int& iterations, StepReport& report);
  void warn(const std::string& message);

  std::shared_ptr<const Mesh> mesh_;
  ModelParams params_;
  BoundaryConditions bcs_;
  TimeConfig config_;
  Forcing forcing_;
  WarningSink warn_sink_;
  std::vector<std::string> warnings_;

  std::unique_ptr<FormAssembler> assembler_;
  std::unique_ptr<Blocks> blocks_;
  std::vector<int> constrained_;
  std::vector<const VelocityData*> constraint_data_;  // null means zero
  bool pinned_ = false;
  mutable SaddlePointSolver solver_;
  // True while solver_ holds a Newton matrix of this stepper.
  mutable bool jacobian_factored_ = false;
};

/// h_min^2, the d = 2 instance of the time-step bound under which the step
/// equations are known to have a unique solution. Used only for warnings.
double uniqueness_timestep_bound(const Mesh& mesh);

SolverState advance_step(TimeStepper& stepper, const SolverState& state,
                         StepReport* report = nullptr);

SolverState run_simulation(std::shared_ptr<const Mesh> mesh, const ModelParams& params,
                           const BoundaryConditions& bcs, const VectorFunction& initial_velocity,
                           const Forcing& forcing, const TimeConfig& config,
                           std::span<const Observer> observers = {});

}  // namespace lmles
