#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "lmles/fem/fe_field.hpp"
#include "lmles/forms/model_params.hpp"
#include "lmles/linalg/sparse_matrix.hpp"

namespace lmles {

/// How the nonlinear terms are differentiated.
enum class Linearization : std::uint8_t {
  None,    ///< residual only
  Picard,  ///< frozen advecting field and frozen viscosity
  Newton,  ///< exact derivative
};

/// Residual and derivative of the nonlinear terms at one linearization point.
struct NonlinearTerms {
  Vector residual;
  SparseMatrix jacobian;
};

using VectorSource = std::function<Eigen::Vector2d(const Point&)>;

/// Assembles every variational operator on a Taylor-Hood pair.
///
/// Patterns and per-cell scatter maps are built once; all velocity-velocity
/// matrices share one pattern (full 2x2 nodal coupling) so they can be summed
/// by value. Per-cell work can be spread over threads; contributions are
/// always accumulated in cell order, so results do not depend on the thread
/// count.
class FormAssembler {
 public:
  FormAssembler(std::shared_ptr<const FunctionSpace> velocity,
                std::shared_ptr<const FunctionSpace> pressure, int nonlinear_degree = 8);

  const FunctionSpace& velocity_space() const noexcept { return *velocity_; }
  const FunctionSpace& pressure_space() const noexcept { return *pressure_; }
  const std::shared_ptr<const FunctionSpace>& velocity_space_ptr() const noexcept { return velocity_; }
  const std::shared_ptr<const FunctionSpace>& pressure_space_ptr() const noexcept { return pressure_; }
  const std::shared_ptr<const SparsityPattern>& velocity_pattern() const noexcept { return vv_pattern_; }
  int nonlinear_degree() const noexcept { return nonlinear_degree_; }

  void set_threads(int threads);
  int threads() const noexcept { return threads_; }

  /// (w, v)
  SparseMatrix mass() const;
  /// coefficient * (grad w, grad v)
  SparseMatrix diffusion(double coefficient) const;
  /// B[q, v] = (q, div v); rows are pressure dofs.
  SparseMatrix divergence() const;

  /// N(u) with v^T N(u) w = b*(u, w, v) or c(u, w, v).
  SparseMatrix convection_linearized(const FeField& u, Formulation formulation) const;
  /// Derivative of v -> form(u, u, v) with respect to u.
  SparseMatrix convection_jacobian(const FeField& u, Formulation formulation) const;
  /// r_v = form(u, u, v)
  Vector convection_residual(const FeField& u, Formulation formulation) const;

  /// r_v = (C_S delta)^r (nu(grad w) grad w, grad v), nu regularized by eps.
  Vector smagorinsky_residual(const FeField& w, const ModelParams& params) const;
  /// Throws SingularJacobianError if s < 2, eps = 0 and grad w vanishes at a
  /// quadrature point.
  SparseMatrix smagorinsky_jacobian(const FeField& w, const ModelParams& params) const;

  /// Convection (params.formulation) plus Smagorinsky terms, fused.
  NonlinearTerms nonlinear(const FeField& w, const ModelParams& params,
                           Linearization linearization) const;

  /// (f, v) with f evaluated at the quadrature points.
  Vector load_vector(const VectorSource& f) const;

 private:
  struct KernelSpec {
    std::optional<Formulation> convection;
    const ModelParams* smagorinsky = nullptr;
    Linearization linearization = Linearization::None;
    bool residual = false;
  };

  void check_velocity(const FeField& u) const;
  void run_kernel(const FeField& u, const KernelSpec& spec, Vector* residual,
                  SparseMatrix* matrix) const;
  void scatter_vv(int cell, const double* local, SparseMatrix& m) const;

  std::shared_ptr<const FunctionSpace> velocity_;
  std::shared_ptr<const FunctionSpace> pressure_;
  int nonlinear_degree_;
  int threads_ = 1;

  std::shared_ptr<const SparsityPattern> vv_pattern_;
  std::vector<int> vv_scatter_;  // per cell 12x12 positions in vv values
  std::shared_ptr<const SparsityPattern> pv_pattern_;
  std::vector<int> pv_scatter_;  // per cell 3x12 positions in B values
};

SparseMatrix assemble_mass(std::shared_ptr<const FunctionSpace> velocity);
SparseMatrix assemble_diffusion(std::shared_ptr<const FunctionSpace> velocity, double coefficient);
SparseMatrix assemble_divergence(std::shared_ptr<const FunctionSpace> velocity,
                                 std::shared_ptr<const FunctionSpace> pressure);
SparseMatrix assemble_convection_linearized(const FeField& u, Formulation formulation);
SparseMatrix assemble_convection_jacobian(const FeField& u, Formulation formulation);
Vector assemble_smagorinsky_residual(const FeField& w, const ModelParams& params);
SparseMatrix assemble_smagorinsky_jacobian(const FeField& w, const ModelParams& params);

}  // namespace lmles
