#include "lmles/stepper/time_stepper.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>

#include "lmles/error.hpp"

namespace lmles {

void TimeConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("dt must be positive");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw InvalidArgument("t_end must be positive");
  if (dt > t_end * (1.0 + 1e-12)) throw InvalidArgument("dt must not exceed t_end");
  if (!(nonlinear_tol > 0.0)) throw InvalidArgument("nonlinear_tol must be positive");
  if (!(linear_tol > 0.0)) throw InvalidArgument("linear_tol must be positive");
  if (nonlinear_max_iters < 1) throw InvalidArgument("nonlinear_max_iters must be at least 1");
  if (picard_max_iters < 1) throw InvalidArgument("picard_max_iters must be at least 1");
  if (threads < 1) throw InvalidArgument("threads must be at least 1");
  const double n = std::round(t_end / dt);
  if (std::abs(n * dt - t_end) > 1e-9 * t_end) {
    std::ostringstream msg;
    msg << "t_end = " << t_end << " is not a whole number of steps of dt = " << dt;
    throw InvalidArgument(msg.str());
  }
}

int TimeConfig::num_steps() const { return static_cast<int>(std::llround(t_end / dt)); }

double TimeConfig::time_of(int n) const {
  const int total = num_steps();
  return n == total ? t_end : n * dt;
}

double uniqueness_timestep_bound(const Mesh& mesh) {
  const double h = mesh.min_diameter();
  return h * h;
}

// Constant operators and the layout of the coupled matrix
//   [ M/dt + K/2 + J/2   -B^T ]
//   [ -B                  0   ]
// whose pressure diagonal is stored so that it can carry the gauge row.
struct TimeStepper::Blocks {
  SparseMatrix mass;
  SparseMatrix diffusion;  // Re^-1 K
  SparseMatrix divergence;
  std::vector<double> constant_vv;  // M/dt + K/2 on the velocity pattern
  std::shared_ptr<const SparsityPattern> full_pattern;
  std::vector<int> vv_to_full;
  std::vector<int> b_to_full;
  std::vector<int> bt_to_full;
  std::vector<double> full_template;  // -B and -B^T entries, zero elsewhere
  Vector pressure_weights;            // int phi_q
  int nv = 0;
  int np = 0;
};

namespace {

// Component held fixed on an axis-aligned no-penetration facet set.
int normal_component(const Mesh& mesh, BoundaryMarker marker) {
  int component = -1;
  for (const auto& f : mesh.boundary()) {
    if (f.marker != marker) continue;
    const Point d = mesh.vertices()[f.vertices[1]] - mesh.vertices()[f.vertices[0]];
    const double scale = d.norm();
    int c;
    if (std::abs(d.x()) <= 1e-12 * scale) {
      c = 0;
    } else if (std::abs(d.y()) <= 1e-12 * scale) {
      c = 1;
    } else {
      throw InvalidArgument("no-penetration is only supported on axis-aligned facets");
    }
    if (component >= 0 && component != c) {
      throw InvalidArgument("no-penetration facets of one marker must share a normal direction");
    }
    component = c;
  }
  return component;
}

void default_warning(const std::string& message) { std::cerr << "warning: " << message << '\n'; }

}  // namespace

TimeStepper::TimeStepper(std::shared_ptr<const Mesh> mesh, ModelParams params,
                         BoundaryConditions bcs, TimeConfig config, Forcing forcing,
                         WarningSink warn)
    : mesh_(std::move(mesh)),
      params_(params),
      bcs_(std::move(bcs)),
      config_(config),
      forcing_(std::move(forcing)),
      warn_sink_(warn ? std::move(warn) : WarningSink(default_warning)) {
  if (!mesh_) throw InvalidArgument("TimeStepper: null mesh");
  params_.validate();
  config_.validate();
  bcs_.validate_for(*mesh_);
  for (const auto& w : params_.warnings()) this->warn(w);

  const double bound = uniqueness_timestep_bound(*mesh_);
  if (config_.dt >= bound) {
    std::ostringstream msg;
    msg << "dt = " << config_.dt << " >= h_min^2 = " << bound
        << "; uniqueness of the step solution is not guaranteed";
    this->warn(msg.str());
  }

  assembler_ = std::make_unique<FormAssembler>(build_space(mesh_, Family::VectorP2),
                                               build_space(mesh_, Family::ScalarP1));
  assembler_->set_threads(config_.threads);
  const FunctionSpace& V = assembler_->velocity_space();
  const FunctionSpace& Q = assembler_->pressure_space();

  // Constraints. Walls come last so they win at corners shared with inflow
  // or outflow segments.
  std::vector<const VelocityData*> source(V.dof_count(), nullptr);
  std::vector<char> fixed(V.dof_count(), 0);
  static const VelocityData kZero;
  for (auto marker : {BoundaryMarker::Inflow, BoundaryMarker::Outflow, BoundaryMarker::Wall}) {
    if (!mesh_->has_marker(marker)) continue;
    const auto* pres = bcs_.find(marker);
    switch (pres->kind) {
      case BoundaryKind::Natural:
        break;
      case BoundaryKind::NoPenetration:
        for (int d : V.boundary_dofs(marker, normal_component(*mesh_, marker))) {
          fixed[d] = 1;
          source[d] = &kZero;
        }
        break;
      case BoundaryKind::Dirichlet:
        for (int d : V.boundary_dofs(marker)) {
          fixed[d] = 1;
          source[d] = pres->value ? &pres->value : &kZero;
        }
        break;
    }
  }
  for (int d = 0; d < V.dof_count(); ++d) {
    if (!fixed[d]) continue;
    constrained_.push_back(d);
    constraint_data_.push_back(*source[d] ? source[d] : nullptr);
  }
  pinned_ = bcs_.encloses(*mesh_);

  auto b = std::make_unique<Blocks>();
  b->nv = V.dof_count();
  b->np = Q.dof_count();
  b->mass = assembler_->mass();
  b->diffusion = assembler_->diffusion(1.0 / params_.reynolds);
  b->divergence = assembler_->divergence();
  b->constant_vv.resize(b->mass.nnz());
  for (int k = 0; k < b->mass.nnz(); ++k) {
    b->constant_vv[k] = b->mass.values()[k] / config_.dt + 0.5 * b->diffusion.values()[k];
  }

  const int nv = b->nv;
  const int n = nv + b->np;
  std::vector<std::pair<int, int>> entries;
  const auto& vvp = *assembler_->velocity_pattern();
  const auto& bp = *b->divergence.pattern();
  entries.reserve(vvp.nnz() + 2 * bp.nnz() + b->np);
  for (int r = 0; r < vvp.rows(); ++r) {
    for (int k = vvp.row_offsets()[r]; k < vvp.row_offsets()[r + 1]; ++k) {
      entries.emplace_back(r, vvp.col_indices()[k]);
    }
  }
  for (int q = 0; q < bp.rows(); ++q) {
    for (int k = bp.row_offsets()[q]; k < bp.row_offsets()[q + 1]; ++k) {
      entries.emplace_back(nv + q, bp.col_indices()[k]);
      entries.emplace_back(bp.col_indices()[k], nv + q);
    }
    entries.emplace_back(nv + q, nv + q);
  }
  b->full_pattern = SparsityPattern::from_entries(n, n, std::move(entries));
  const auto& fp = *b->full_pattern;

  b->vv_to_full.resize(vvp.nnz());
  for (int r = 0; r < vvp.rows(); ++r) {
    for (int k = vvp.row_offsets()[r]; k < vvp.row_offsets()[r + 1]; ++k) {
      b->vv_to_full[k] = fp.find(r, vvp.col_indices()[k]);
    }
  }
  b->full_template.assign(fp.nnz(), 0.0);
  b->b_to_full.resize(bp.nnz());
  b->bt_to_full.resize(bp.nnz());
  for (int q = 0; q < bp.rows(); ++q) {
    for (int k = bp.row_offsets()[q]; k < bp.row_offsets()[q + 1]; ++k) {
      const int v = bp.col_indices()[k];
      b->b_to_full[k] = fp.find(nv + q, v);
      b->bt_to_full[k] = fp.find(v, nv + q);
      b->full_template[b->b_to_full[k]] = -b->divergence.values()[k];
      b->full_template[b->bt_to_full[k]] = -b->divergence.values()[k];
    }
  }

  b->pressure_weights = Vector::Zero(b->np);
  for (std::size_t c = 0; c < mesh_->num_cells(); ++c) {
    const double third = mesh_->cell_area(static_cast<int>(c)) / 3.0;
    for (int node : Q.cell_nodes(static_cast<int>(c))) b->pressure_weights[node] += third;
  }
  blocks_ = std::move(b);

  // With no free normal velocity anywhere, (div w, 1) = 0 forces the
  // prescribed data to carry zero net flux; otherwise no step can succeed.
  if (pinned_) {
    for (double t : {0.0, config_.time_of(1)}) {
      Vector w = Vector::Zero(blocks_->nv);
      apply_constraints(w, t);
      const Vector bw = blocks_->divergence.multiply(w);
      const double flux = bw.sum();
      if (std::abs(flux) > 1e-8 * std::max(1.0, bw.cwiseAbs().sum())) {
        std::ostringstream msg;
        msg << "boundary data has net outward flux " << flux << " at t = " << t
            << " but every boundary segment constrains the normal velocity; an incompressible "
               "flow needs zero net flux (leave an outflow segment natural)";
        throw InvalidArgument(msg.str());
      }
    }
  }
}

TimeStepper::~TimeStepper() = default;

void TimeStepper::warn(const std::string& message) {
  warnings_.push_back(message);
  warn_sink_(message);
}

Vector TimeStepper::boundary_values(double t) const {
  const auto& nodes = velocity_space().node_coordinates();
  Vector g(static_cast<Eigen::Index>(constrained_.size()));
  // Consecutive dofs of one node share a data call.
  int last_node = -1;
  Eigen::Vector2d value = Eigen::Vector2d::Zero();
  for (std::size_t i = 0; i < constrained_.size(); ++i) {
    const int dof = constrained_[i];
    const VelocityData* data = constraint_data_[i];
    if (!data) {
      g[static_cast<Eigen::Index>(i)] = 0.0;
      continue;
    }
    const int node = dof / 2;
    if (node != last_node) {
      value = (*data)(nodes[node], t);
      last_node = node;
    }
    g[static_cast<Eigen::Index>(i)] = value[dof % 2];
  }
  return g;
}

void TimeStepper::apply_constraints(Vector& w, double t) const {
  const Vector g = boundary_values(t);
  for (std::size_t i = 0; i < constrained_.size(); ++i) {
    w[constrained_[i]] = g[static_cast<Eigen::Index>(i)];
  }
}

Vector TimeStepper::load_at(double t) const {
  if (!forcing_) return Vector::Zero(blocks_->nv);
  return assembler_->load_vector([&](const Point& x) { return forcing_(x, t); });
}

void TimeStepper::zero_mean(Vector& p) const {
  const double mean = blocks_->pressure_weights.dot(p) / blocks_->pressure_weights.sum();
  p.array() -= mean;
}

double TimeStepper::divergence_residual(const FeField& w) const {
  const Vector bw = blocks_->divergence.multiply(w.coefficients());
  return bw.size() ? bw.cwiseAbs().maxCoeff() : 0.0;
}

double TimeStepper::fill_residual(const SolverState& state, const Vector& w, const Vector& p,
                                  const Vector& nonlinear_residual, const Vector& load,
                                  Vector& residual) const {
  const Blocks& b = *blocks_;
  const Vector& w_old = state.velocity.coefficients();
  const Vector w_mid = 0.5 * (w + w_old);
  residual.resize(b.nv + b.np);
  residual.head(b.nv) = b.mass.multiply(w - w_old) / config_.dt + b.diffusion.multiply(w_mid) +
                        nonlinear_residual - b.divergence.multiply_transpose(p) - load;
  residual.tail(b.np) = -b.divergence.multiply(w);

  const Vector g = boundary_values(config_.time_of(state.step + 1));
  for (std::size_t i = 0; i < constrained_.size(); ++i) {
    residual[constrained_[i]] = w[constrained_[i]] - g[static_cast<Eigen::Index>(i)];
  }
  if (pinned_) residual[b.nv] = p[0] - state.pressure.coefficients()[0];
  return residual.norm();
}

void TimeStepper::fill_jacobian(const SparseMatrix& nonlinear_jacobian,
                                SparseMatrix& jacobian) const {
  const Blocks& b = *blocks_;
  std::vector<double> values = b.full_template;
  const auto nl = nonlinear_jacobian.values();
  for (std::size_t k = 0; k < b.vv_to_full.size(); ++k) {
    values[b.vv_to_full[k]] += b.constant_vv[k] + 0.5 * nl[k];
  }
  jacobian = SparseMatrix(b.full_pattern, std::move(values));
  for (int d : constrained_) jacobian.set_identity_row(d);
  if (pinned_) jacobian.set_identity_row(b.nv);
}

StepSystem TimeStepper::build_system(const SolverState& state, const FeField& w, const FeField& p,
                                     Linearization linearization) const {
  if (w.coefficients().size() != blocks_->nv || p.coefficients().size() != blocks_->np) {
    throw SpaceMismatch("build_system: candidate does not match the stepper's spaces");
  }
  const FeField w_mid(assembler_->velocity_space_ptr(),
                      0.5 * (w.coefficients() + state.velocity.coefficients()));
  const double t_mid = 0.5 * (config_.time_of(state.step) + config_.time_of(state.step + 1));
  NonlinearTerms nl = assembler_->nonlinear(w_mid, params_, linearization);
  StepSystem sys;
  fill_residual(state, w.coefficients(), p.coefficients(), nl.residual, load_at(t_mid),
                sys.residual);
  if (linearization != Linearization::None) fill_jacobian(nl.jacobian, sys.jacobian);
  return sys;
}

Vector TimeStepper::residual(const SolverState& state, const FeField& w, const FeField& p) const {
  return build_system(state, w, p, Linearization::None).residual;
}

SolverState TimeStepper::initial_state(const VectorFunction& w0) const {
  return initial_state(interpolate(assembler_->velocity_space_ptr(), w0));
}

SolverState TimeStepper::initial_state(FeField w0) const {
  if (w0.coefficients().size() != blocks_->nv || !w0.space().same_mesh(velocity_space())) {
    throw SpaceMismatch("initial velocity does not live on the stepper's mesh");
  }
  w0.check();
  FeField velocity(assembler_->velocity_space_ptr(), std::move(w0.coefficients()));
  SolverState s{0, 0.0, std::move(velocity), FeField(assembler_->pressure_space_ptr()),
                params_.formulation, {}};
  return s;
}

FeField TimeStepper::project(const FeField& u, double t) const {
  const Blocks& b = *blocks_;
  std::vector<double> values = b.full_template;
  const auto m = b.mass.values();
  for (std::size_t k = 0; k < b.vv_to_full.size(); ++k) values[b.vv_to_full[k]] += m[k];
  SparseMatrix a(b.full_pattern, std::move(values));
  for (int d : constrained_) a.set_identity_row(d);
  if (pinned_) a.set_identity_row(b.nv);

  Vector rhs = Vector::Zero(b.nv + b.np);
  rhs.head(b.nv) = b.mass.multiply(u.coefficients());
  const Vector g = boundary_values(t);
  for (std::size_t i = 0; i < constrained_.size(); ++i) {
    rhs[constrained_[i]] = g[static_cast<Eigen::Index>(i)];
  }
  jacobian_factored_ = false;
  auto result = solver_.solve(a, rhs, config_.linear_tol);
  return FeField(assembler_->velocity_space_ptr(), result.x.head(b.nv));
}

bool TimeStepper::solve_nonlinear(const SolverState& state, Linearization linearization,
                                  int max_iters, Vector& w, Vector& p, int& iterations,
                                  StepReport& report) {
  const Blocks& b = *blocks_;
  const double t_mid = 0.5 * (config_.time_of(state.step) + config_.time_of(state.step + 1));
  const Vector load = load_at(t_mid);
  const Vector& w_old = state.velocity.coefficients();
  const auto& V = assembler_->velocity_space_ptr();
  auto& history = report.residual_history;
  const std::size_t first = history.size();
  const bool reuse = config_.reuse_jacobian && linearization == Linearization::Newton;
  bool refresh = !reuse || !jacobian_factored_;
  bool fresh = false;
  Vector residual;
  SparseMatrix jacobian;
  for (iterations = 0;; ++iterations) {
    const FeField w_mid(V, 0.5 * (w + w_old));
    const NonlinearTerms nl = assembler_->nonlinear(w_mid, params_, Linearization::None);
    const double norm = fill_residual(state, w, p, nl.residual, load, residual);
    history.push_back(norm);
    if (!std::isfinite(norm)) return false;
    if (norm <= config_.nonlinear_tol) return true;
    if (iterations == max_iters) return false;
    if (norm > 1e8 * (history[first] + 1.0)) return false;
    // A lagged matrix that no longer contracts fast is rebuilt.
    if (reuse && !fresh && history.size() > first + 1 &&
        norm > 0.25 * history[history.size() - 2]) {
      refresh = true;
    }

    Vector delta;
    if (refresh) {
      jacobian_factored_ = false;
      fill_jacobian(assembler_->nonlinear(w_mid, params_, linearization).jacobian, jacobian);
      ++report.factorizations;
      if (reuse) {
        solver_.factorize(jacobian);
        jacobian_factored_ = true;
        delta = solver_.solve_factored(-residual);
      } else {
        delta = solver_.solve(jacobian, -residual, config_.linear_tol).x;
      }
      refresh = !reuse;
      fresh = true;
    } else {
      delta = solver_.solve_factored(-residual);
      fresh = false;
    }
    w += delta.head(b.nv);
    p += delta.tail(b.np);
  }
}

SolverState TimeStepper::advance(const SolverState& state, StepReport* report) {
  if (state.velocity.coefficients().size() != blocks_->nv ||
      state.pressure.coefficients().size() != blocks_->np) {
    throw SpaceMismatch("advance: state does not match the stepper's spaces");
  }
  if (state.step >= config_.num_steps()) {
    throw InvalidArgument("advance: state is already at t_end");
  }
  const double t_next = config_.time_of(state.step + 1);
  StepReport local;
  StepReport& rep = report ? *report : local;
  rep = {};

  Vector w0 = state.velocity.coefficients();
  apply_constraints(w0, t_next);
  Vector w = w0;
  Vector p = state.pressure.coefficients();

  bool ok = false;
  std::string reason;
  try {
    ok = solve_nonlinear(state, Linearization::Newton, config_.nonlinear_max_iters, w, p,
                         rep.newton_iterations, rep);
  } catch (const SingularJacobianError& e) {
    reason = e.what();
  } catch (const SingularSystemError& e) {
    reason = e.what();
  }
  if (!ok && config_.picard_fallback) {
    rep.used_picard = true;
    w = w0;
    p = state.pressure.coefficients();
    try {
      ok = solve_nonlinear(state, Linearization::Picard, config_.picard_max_iters, w, p,
                           rep.picard_iterations, rep);
    } catch (const SingularSystemError& e) {
      reason = e.what();
    }
  }
  if (!ok) {
    std::ostringstream msg;
    msg << "nonlinear solve failed at step " << state.step + 1 << " (t = " << t_next << ")";
    if (!rep.residual_history.empty()) msg << ", last residual " << rep.residual_history.back();
    if (!reason.empty()) msg << ": " << reason;
    throw StepFailure(msg.str(), state.step + 1, rep.residual_history);
  }
  if (pinned_) zero_mean(p);

  SolverState next{state.step + 1,
                   t_next,
                   FeField(state.velocity.space_ptr(), std::move(w)),
                   FeField(state.pressure.space_ptr(), std::move(p)),
                   state.formulation,
                   state.log};
  if (!next.velocity.coefficients().allFinite() || !next.pressure.coefficients().allFinite()) {
    throw StepFailure("non-finite solution after step " + std::to_string(next.step), next.step,
                      rep.residual_history);
  }
  rep.div_residual = divergence_residual(next.velocity);
  return next;
}

SolverState TimeStepper::run(SolverState state, std::span<const Observer> observers) {
  if (state.log.empty()) {
    state.log.push(measure(state.velocity, state.step, state.time,
                           divergence_residual(state.velocity), 0));
    for (const auto& obs : observers) obs(state.step, state.time, state);
  }
  const int total = config_.num_steps();
  while (state.step < total) {
    StepReport rep;
    SolverState next = advance(state, &rep);
    // The log moves along instead of being copied every step.
    next.log = std::move(state.log);
    next.log.push(measure(next.velocity, next.step, next.time, rep.div_residual,
                          rep.newton_iterations + rep.picard_iterations));
    state = std::move(next);
    for (const auto& obs : observers) obs(state.step, state.time, state);
  }
  return state;
}

SolverState advance_step(TimeStepper& stepper, const SolverState& state, StepReport* report) {
  return stepper.advance(state, report);
}

SolverState run_simulation(std::shared_ptr<const Mesh> mesh, const ModelParams& params,
                           const BoundaryConditions& bcs, const VectorFunction& initial_velocity,
                           const Forcing& forcing, const TimeConfig& config,
                           std::span<const Observer> observers) {
  TimeStepper stepper(std::move(mesh), params, bcs, config, forcing);
  return stepper.run(stepper.initial_state(initial_velocity), observers);
}

}  // namespace lmles
