#include "lmles/forms/form_assembler.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <thread>

#include "lmles/error.hpp"
#include "lmles/fem/cell_values.hpp"
#include "lmles/fem/quadrature.hpp"

namespace lmles {

namespace {

constexpr int kLocal = 12;  // VectorP2 dofs per cell

// Full coupling between the dofs of each cell of `rows` and `cols`.
std::shared_ptr<const SparsityPattern> coupling_pattern(const FunctionSpace& rows,
                                                        const FunctionSpace& cols) {
  std::vector<std::pair<int, int>> entries;
  const std::size_t nc = rows.mesh().num_cells();
  entries.reserve(nc * rows.dofs_per_cell() * cols.dofs_per_cell());
  for (std::size_t c = 0; c < nc; ++c) {
    for (int r : rows.cell_dofs(static_cast<int>(c))) {
      for (int s : cols.cell_dofs(static_cast<int>(c))) entries.emplace_back(r, s);
    }
  }
  return SparsityPattern::from_entries(rows.dof_count(), cols.dof_count(), std::move(entries));
}

std::vector<int> scatter_map(const SparsityPattern& pattern, const FunctionSpace& rows,
                             const FunctionSpace& cols) {
  const std::size_t nc = rows.mesh().num_cells();
  const int nr = rows.dofs_per_cell();
  const int ns = cols.dofs_per_cell();
  std::vector<int> map(nc * nr * ns);
  for (std::size_t c = 0; c < nc; ++c) {
    const auto rd = rows.cell_dofs(static_cast<int>(c));
    const auto cd = cols.cell_dofs(static_cast<int>(c));
    for (int i = 0; i < nr; ++i) {
      for (int j = 0; j < ns; ++j) map[(c * nr + i) * ns + j] = pattern.find(rd[i], cd[j]);
    }
  }
  return map;
}

// Mass or stiffness on any Lagrange space, same block for every component.
SparseMatrix scalar_operator(const FunctionSpace& space, bool stiffness, double coefficient) {
  const auto pattern = coupling_pattern(space, space);
  SparseMatrix m(pattern);
  const int degree = stiffness ? 2 : 4;
  CellValues cv(space, quadrature_rule(degree));
  const int ns = cv.n_shapes();
  const int nc = space.components();
  std::array<double, 36> local{};
  for (std::size_t c = 0; c < space.mesh().num_cells(); ++c) {
    cv.reinit(static_cast<int>(c));
    local.fill(0.0);
    for (int q = 0; q < cv.n_points(); ++q) {
      for (int a = 0; a < ns; ++a) {
        for (int b = 0; b < ns; ++b) {
          const double v = stiffness ? cv.shape_grad(q, a).dot(cv.shape_grad(q, b))
                                     : cv.shape(q, a) * cv.shape(q, b);
          local[a * ns + b] += coefficient * v * cv.JxW(q);
        }
      }
    }
    const auto dofs = space.cell_dofs(static_cast<int>(c));
    for (int a = 0; a < ns; ++a) {
      for (int b = 0; b < ns; ++b) {
        for (int i = 0; i < nc; ++i) m.add(dofs[a * nc + i], dofs[b * nc + i], local[a * ns + b]);
      }
    }
  }
  return m;
}

}  // namespace

FormAssembler::FormAssembler(std::shared_ptr<const FunctionSpace> velocity,
                             std::shared_ptr<const FunctionSpace> pressure, int nonlinear_degree)
    : velocity_(std::move(velocity)), pressure_(std::move(pressure)), nonlinear_degree_(nonlinear_degree) {
  if (!velocity_ || velocity_->family() != Family::VectorP2) {
    throw InvalidArgument("FormAssembler: velocity space must be VectorP2");
  }
  if (!pressure_ || pressure_->family() != Family::ScalarP1) {
    throw InvalidArgument("FormAssembler: pressure space must be ScalarP1");
  }
  if (!velocity_->same_mesh(*pressure_)) {
    throw SpaceMismatch("FormAssembler: velocity and pressure spaces live on different meshes");
  }
  quadrature_rule(nonlinear_degree_);  // validates the degree
  vv_pattern_ = coupling_pattern(*velocity_, *velocity_);
  vv_scatter_ = scatter_map(*vv_pattern_, *velocity_, *velocity_);
  pv_pattern_ = coupling_pattern(*pressure_, *velocity_);
  pv_scatter_ = scatter_map(*pv_pattern_, *pressure_, *velocity_);
}

void FormAssembler::set_threads(int threads) { threads_ = std::max(1, threads); }

void FormAssembler::check_velocity(const FeField& u) const {
  if (u.space_ptr() != velocity_ && !(u.space().same_mesh(*velocity_) &&
                                      u.space().family() == Family::VectorP2)) {
    throw SpaceMismatch("field does not live in the assembler's velocity space");
  }
  if (u.coefficients().size() != velocity_->dof_count()) {
    throw SpaceMismatch("field has the wrong number of coefficients");
  }
}

void FormAssembler::scatter_vv(int cell, const double* local, SparseMatrix& m) const {
  const int* pos = vv_scatter_.data() + static_cast<std::size_t>(cell) * kLocal * kLocal;
  auto values = m.values();
  for (int k = 0; k < kLocal * kLocal; ++k) values[pos[k]] += local[k];
}

SparseMatrix FormAssembler::mass() const {
  SparseMatrix m(vv_pattern_);
  CellValues cv(*velocity_, quadrature_rule(4));
  std::array<double, kLocal * kLocal> local{};
  for (std::size_t c = 0; c < velocity_->mesh().num_cells(); ++c) {
    cv.reinit(static_cast<int>(c));
    local.fill(0.0);
    for (int q = 0; q < cv.n_points(); ++q) {
      for (int a = 0; a < 6; ++a) {
        for (int b = 0; b < 6; ++b) {
          const double v = cv.shape(q, a) * cv.shape(q, b) * cv.JxW(q);
          local[(2 * a) * kLocal + 2 * b] += v;
          local[(2 * a + 1) * kLocal + 2 * b + 1] += v;
        }
      }
    }
    scatter_vv(static_cast<int>(c), local.data(), m);
  }
  return m;
}

SparseMatrix FormAssembler::diffusion(double coefficient) const {
  if (coefficient < 0.0) throw InvalidArgument("diffusion: coefficient must be >= 0");
  SparseMatrix m(vv_pattern_);
  CellValues cv(*velocity_, quadrature_rule(2));
  std::array<double, kLocal * kLocal> local{};
  for (std::size_t c = 0; c < velocity_->mesh().num_cells(); ++c) {
    cv.reinit(static_cast<int>(c));
    local.fill(0.0);
    for (int q = 0; q < cv.n_points(); ++q) {
      for (int a = 0; a < 6; ++a) {
        for (int b = 0; b < 6; ++b) {
          const double v = coefficient * cv.shape_grad(q, a).dot(cv.shape_grad(q, b)) * cv.JxW(q);
          local[(2 * a) * kLocal + 2 * b] += v;
          local[(2 * a + 1) * kLocal + 2 * b + 1] += v;
        }
      }
    }
    scatter_vv(static_cast<int>(c), local.data(), m);
  }
  return m;
}

SparseMatrix FormAssembler::divergence() const {
  SparseMatrix m(pv_pattern_);
  CellValues cv_u(*velocity_, quadrature_rule(2));
  CellValues cv_p(*pressure_, quadrature_rule(2));
  auto values = m.values();
  std::array<double, 3 * kLocal> local{};
  for (std::size_t c = 0; c < velocity_->mesh().num_cells(); ++c) {
    cv_u.reinit(static_cast<int>(c));
    cv_p.reinit(static_cast<int>(c));
    local.fill(0.0);
    for (int q = 0; q < cv_u.n_points(); ++q) {
      for (int k = 0; k < 3; ++k) {
        const double psi = cv_p.shape(q, k) * cv_u.JxW(q);
        for (int b = 0; b < 6; ++b) {
          const Eigen::Vector2d& g = cv_u.shape_grad(q, b);
          local[k * kLocal + 2 * b] += psi * g.x();
          local[k * kLocal + 2 * b + 1] += psi * g.y();
        }
      }
    }
    const int* pos = pv_scatter_.data() + c * 3 * kLocal;
    for (int k = 0; k < 3 * kLocal; ++k) values[pos[k]] += local[k];
  }
  return m;
}

void FormAssembler::run_kernel(const FeField& u, const KernelSpec& spec, Vector* residual,
                               SparseMatrix* matrix) const {
  check_velocity(u);
  const Mesh& mesh = velocity_->mesh();
  const int n_cells = static_cast<int>(mesh.num_cells());
  const Vector& coeffs = u.coefficients();
  const bool want_matrix = matrix != nullptr && spec.linearization != Linearization::None;
  const bool newton = spec.linearization == Linearization::Newton;

  double smag_c = 0.0;
  double s = 0.0;
  double eps2 = 0.0;
  if (spec.smagorinsky) {
    smag_c = spec.smagorinsky->model_coefficient();
    s = spec.smagorinsky->exponent_s;
    eps2 = spec.smagorinsky->regularization_eps * spec.smagorinsky->regularization_eps;
  }
  const bool with_smag = spec.smagorinsky && smag_c > 0.0;
  const QuadratureRule rule = quadrature_rule(nonlinear_degree_);

  // Local contributions per cell: 12 residual entries then 144 matrix entries.
  constexpr int stride = kLocal + kLocal * kLocal;
  std::vector<double> buffer(static_cast<std::size_t>(n_cells) * stride, 0.0);

  const auto work = [&](int first, int last) {
    CellValues cv(*velocity_, rule);
    std::array<double, 6> adv{};
    std::array<Eigen::Vector2d, 6> grad_dot{};  // (G.row(i) . grad phi_a) for i = 0, 1
    for (int c = first; c < last; ++c) {
      cv.reinit(c);
      double* res = buffer.data() + static_cast<std::size_t>(c) * stride;
      double* mat = res + kLocal;
      for (int q = 0; q < cv.n_points(); ++q) {
        const double jxw = cv.JxW(q);
        const Eigen::Vector2d U = cv.vector_value(coeffs, q);
        const Eigen::Matrix2d G = cv.vector_gradient(coeffs, q);
        const double divu = G(0, 0) + G(1, 1);
        for (int a = 0; a < 6; ++a) {
          adv[a] = U.dot(cv.shape_grad(q, a));
          grad_dot[a] = G * cv.shape_grad(q, a);
        }

        if (spec.convection == Formulation::Skew) {
          const Eigen::Vector2d GU = G * U;
          if (spec.residual) {
            for (int a = 0; a < 6; ++a) {
              const double phi = cv.shape(q, a);
              for (int i = 0; i < 2; ++i) {
                res[2 * a + i] += jxw * 0.5 * (GU[i] * phi - adv[a] * U[i]);
              }
            }
          }
          if (want_matrix) {
            for (int a = 0; a < 6; ++a) {
              const double phi_a = cv.shape(q, a);
              const Eigen::Vector2d& dphi_a = cv.shape_grad(q, a);
              for (int b = 0; b < 6; ++b) {
                const double phi_b = cv.shape(q, b);
                const double picard = jxw * 0.5 * (adv[b] * phi_a - adv[a] * phi_b);
                mat[(2 * a) * kLocal + 2 * b] += picard;
                mat[(2 * a + 1) * kLocal + 2 * b + 1] += picard;
                if (newton) {
                  for (int i = 0; i < 2; ++i) {
                    for (int j = 0; j < 2; ++j) {
                      mat[(2 * a + i) * kLocal + 2 * b + j] +=
                          jxw * 0.5 * phi_b * (G(i, j) * phi_a - dphi_a[j] * U[i]);
                    }
                  }
                }
              }
            }
          }
        } else if (spec.convection == Formulation::Emac) {
          const Eigen::Matrix2d S = G + G.transpose();
          if (spec.residual) {
            const Eigen::Vector2d SU = S * U + divu * U;
            for (int a = 0; a < 6; ++a) {
              const double phi = cv.shape(q, a);
              for (int i = 0; i < 2; ++i) res[2 * a + i] += jxw * phi * SU[i];
            }
          }
          if (want_matrix) {
            for (int a = 0; a < 6; ++a) {
              const double phi_a = cv.shape(q, a);
              for (int b = 0; b < 6; ++b) {
                const double phi_b = cv.shape(q, b);
                const Eigen::Vector2d& dphi_b = cv.shape_grad(q, b);
                for (int i = 0; i < 2; ++i) {
                  for (int j = 0; j < 2; ++j) {
                    double v = phi_b * (S(i, j) + (i == j ? divu : 0.0));
                    if (newton) {
                      v += (i == j ? adv[b] : 0.0) + U[j] * dphi_b[i] + U[i] * dphi_b[j];
                    }
                    mat[(2 * a + i) * kLocal + 2 * b + j] += jxw * phi_a * v;
                  }
                }
              }
            }
          }
        }

        if (with_smag) {
          const double n2 = G.squaredNorm() + eps2;
          if (want_matrix && newton && s < 2.0 && n2 == 0.0) {
            throw SingularJacobianError(
                "Smagorinsky Jacobian is singular where grad w = 0 with s < 2 and eps = 0");
          }
          const double nu = smag_c * std::pow(n2, 0.5 * s);
          if (spec.residual) {
            for (int a = 0; a < 6; ++a) {
              for (int i = 0; i < 2; ++i) res[2 * a + i] += jxw * nu * grad_dot[a][i];
            }
          }
          if (want_matrix) {
            const double beta = newton ? smag_c * s * (n2 > 0.0 ? std::pow(n2, 0.5 * s - 1.0) : 0.0)
                                       : 0.0;
            for (int a = 0; a < 6; ++a) {
              for (int b = 0; b < 6; ++b) {
                const double lap = jxw * nu * cv.shape_grad(q, a).dot(cv.shape_grad(q, b));
                mat[(2 * a) * kLocal + 2 * b] += lap;
                mat[(2 * a + 1) * kLocal + 2 * b + 1] += lap;
                if (beta != 0.0) {
                  for (int i = 0; i < 2; ++i) {
                    for (int j = 0; j < 2; ++j) {
                      mat[(2 * a + i) * kLocal + 2 * b + j] +=
                          jxw * beta * grad_dot[a][i] * grad_dot[b][j];
                    }
                  }
                }
              }
            }
          }
        }
      }
    }
  };

  const int threads = std::min(threads_, std::max(1, n_cells / 64));
  if (threads <= 1) {
    work(0, n_cells);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    const int chunk = (n_cells + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      const int first = t * chunk;
      const int last = std::min(n_cells, first + chunk);
      pool.emplace_back([&, t, first, last] {
        try {
          work(first, last);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  if (residual) *residual = Vector::Zero(velocity_->dof_count());
  if (matrix) *matrix = SparseMatrix(vv_pattern_);
  for (int c = 0; c < n_cells; ++c) {
    const double* res = buffer.data() + static_cast<std::size_t>(c) * stride;
    if (residual) {
      const auto dofs = velocity_->cell_dofs(c);
      for (int k = 0; k < kLocal; ++k) (*residual)[dofs[k]] += res[k];
    }
    if (want_matrix) scatter_vv(c, res + kLocal, *matrix);
  }
}

SparseMatrix FormAssembler::convection_linearized(const FeField& u, Formulation formulation) const {
  SparseMatrix m;
  run_kernel(u, {formulation, nullptr, Linearization::Picard, false}, nullptr, &m);
  return m;
}

SparseMatrix FormAssembler::convection_jacobian(const FeField& u, Formulation formulation) const {
  SparseMatrix m;
  run_kernel(u, {formulation, nullptr, Linearization::Newton, false}, nullptr, &m);
  return m;
}

Vector FormAssembler::convection_residual(const FeField& u, Formulation formulation) const {
  Vector r;
  run_kernel(u, {formulation, nullptr, Linearization::None, true}, &r, nullptr);
  return r;
}

Vector FormAssembler::smagorinsky_residual(const FeField& w, const ModelParams& params) const {
  Vector r;
  run_kernel(w, {std::nullopt, &params, Linearization::None, true}, &r, nullptr);
  return r;
}

SparseMatrix FormAssembler::smagorinsky_jacobian(const FeField& w, const ModelParams& params) const {
  SparseMatrix m;
  run_kernel(w, {std::nullopt, &params, Linearization::Newton, false}, nullptr, &m);
  return m;
}

NonlinearTerms FormAssembler::nonlinear(const FeField& w, const ModelParams& params,
                                        Linearization linearization) const {
  NonlinearTerms out;
  run_kernel(w, {params.formulation, &params, linearization, true}, &out.residual,
             linearization == Linearization::None ? nullptr : &out.jacobian);
  return out;
}

Vector FormAssembler::load_vector(const VectorSource& f) const {
  Vector r = Vector::Zero(velocity_->dof_count());
  if (!f) return r;
  CellValues cv(*velocity_, quadrature_rule(nonlinear_degree_));
  for (std::size_t c = 0; c < velocity_->mesh().num_cells(); ++c) {
    cv.reinit(static_cast<int>(c));
    const auto dofs = velocity_->cell_dofs(static_cast<int>(c));
    for (int q = 0; q < cv.n_points(); ++q) {
      const Eigen::Vector2d fq = f(cv.point(q));
      for (int a = 0; a < 6; ++a) {
        const double w = cv.shape(q, a) * cv.JxW(q);
        r[dofs[2 * a]] += w * fq.x();
        r[dofs[2 * a + 1]] += w * fq.y();
      }
    }
  }
  return r;
}

namespace {

FormAssembler assembler_for(const std::shared_ptr<const FunctionSpace>& velocity) {
  return FormAssembler(velocity, build_space(velocity->mesh_ptr(), Family::ScalarP1));
}

}  // namespace

SparseMatrix assemble_mass(std::shared_ptr<const FunctionSpace> space) {
  if (space->family() == Family::VectorP2) return assembler_for(space).mass();
  return scalar_operator(*space, false, 1.0);
}

SparseMatrix assemble_diffusion(std::shared_ptr<const FunctionSpace> space, double coefficient) {
  if (coefficient < 0.0) throw InvalidArgument("diffusion: coefficient must be >= 0");
  if (space->family() == Family::VectorP2) return assembler_for(space).diffusion(coefficient);
  return scalar_operator(*space, true, coefficient);
}

SparseMatrix assemble_divergence(std::shared_ptr<const FunctionSpace> velocity,
                                 std::shared_ptr<const FunctionSpace> pressure) {
  return FormAssembler(std::move(velocity), std::move(pressure)).divergence();
}

SparseMatrix assemble_convection_linearized(const FeField& u, Formulation formulation) {
  return assembler_for(u.space_ptr()).convection_linearized(u, formulation);
}

SparseMatrix assemble_convection_jacobian(const FeField& u, Formulation formulation) {
  return assembler_for(u.space_ptr()).convection_jacobian(u, formulation);
}

Vector assemble_smagorinsky_residual(const FeField& w, const ModelParams& params) {
  return assembler_for(w.space_ptr()).smagorinsky_residual(w, params);
}

SparseMatrix assemble_smagorinsky_jacobian(const FeField& w, const ModelParams& params) {
  return assembler_for(w.space_ptr()).smagorinsky_jacobian(w, params);
}

}  // namespace lmles
