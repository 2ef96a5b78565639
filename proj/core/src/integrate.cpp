#include "lmles/fem/integrate.hpp"

#include <memory>
#include <vector>

#include "lmles/error.hpp"
#include "lmles/fem/cell_values.hpp"

namespace lmles {

CellGeometry CellGeometry::of(const Mesh& mesh, int cell) {
  const auto& t = mesh.cells()[cell];
  const auto& v = mesh.vertices();
  CellGeometry g;
  g.origin = v[t[0]];
  g.jacobian.col(0) = v[t[1]] - v[t[0]];
  g.jacobian.col(1) = v[t[2]] - v[t[0]];
  g.det = g.jacobian.determinant();
  g.inverse_transpose = g.jacobian.inverse().transpose();
  return g;
}

CellValues::CellValues(const FunctionSpace& space, QuadratureRule rule)
    : space_(space), rule_(std::move(rule)), n_shapes_(space.nodes_per_cell()) {
  const int nq = n_points();
  values_.resize(nq * n_shapes_);
  ref_grads_.resize(nq * n_shapes_);
  grads_.resize(nq * n_shapes_);
  jxw_.resize(nq);
  points_.resize(nq);
  for (int q = 0; q < nq; ++q) {
    const BasisValues b = reference_basis_unchecked(space.family(), rule_.points[q]);
    for (int a = 0; a < n_shapes_; ++a) {
      values_[q * n_shapes_ + a] = b.values[a];
      ref_grads_[q * n_shapes_ + a] = b.gradients[a];
    }
  }
}

void CellValues::reinit(int cell) {
  cell_ = cell;
  const CellGeometry g = CellGeometry::of(space_.mesh(), cell);
  const int nq = n_points();
  for (int q = 0; q < nq; ++q) {
    jxw_[q] = rule_.weights[q] * g.det;
    points_[q] = g.map(rule_.points[q]);
    for (int a = 0; a < n_shapes_; ++a) {
      grads_[q * n_shapes_ + a] = g.inverse_transpose * ref_grads_[q * n_shapes_ + a];
    }
  }
}

double CellValues::scalar_value(const Vector& coeffs, int q) const {
  const auto dofs = space_.cell_dofs(cell_);
  double v = 0.0;
  for (int a = 0; a < n_shapes_; ++a) v += coeffs[dofs[a]] * shape(q, a);
  return v;
}

Eigen::Vector2d CellValues::scalar_gradient(const Vector& coeffs, int q) const {
  const auto dofs = space_.cell_dofs(cell_);
  Eigen::Vector2d g = Eigen::Vector2d::Zero();
  for (int a = 0; a < n_shapes_; ++a) g += coeffs[dofs[a]] * shape_grad(q, a);
  return g;
}

Eigen::Vector2d CellValues::vector_value(const Vector& coeffs, int q) const {
  const auto dofs = space_.cell_dofs(cell_);
  Eigen::Vector2d v = Eigen::Vector2d::Zero();
  for (int a = 0; a < n_shapes_; ++a) {
    const double phi = shape(q, a);
    v.x() += coeffs[dofs[2 * a]] * phi;
    v.y() += coeffs[dofs[2 * a + 1]] * phi;
  }
  return v;
}

Eigen::Matrix2d CellValues::vector_gradient(const Vector& coeffs, int q) const {
  const auto dofs = space_.cell_dofs(cell_);
  Eigen::Matrix2d g = Eigen::Matrix2d::Zero();
  for (int a = 0; a < n_shapes_; ++a) {
    const Eigen::Vector2d& dphi = shape_grad(q, a);
    g.row(0) += coeffs[dofs[2 * a]] * dphi.transpose();
    g.row(1) += coeffs[dofs[2 * a + 1]] * dphi.transpose();
  }
  return g;
}

double integrate_field(std::span<const FeField* const> fields, const FieldIntegrand& integrand,
                       int quadrature_degree) {
  if (fields.empty()) throw InvalidArgument("integrate_field: no fields given");
  const Mesh& mesh = fields.front()->space().mesh();
  for (const FeField* f : fields) {
    if (!f->space().same_mesh(fields.front()->space())) {
      throw SpaceMismatch("integrate_field: fields live on different meshes");
    }
  }
  const QuadratureRule rule = quadrature_rule(quadrature_degree);
  std::vector<std::unique_ptr<CellValues>> values;
  values.reserve(fields.size());
  for (const FeField* f : fields) values.push_back(std::make_unique<CellValues>(f->space(), rule));

  std::vector<FieldSample> samples(fields.size());
  double total = 0.0;
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    for (auto& v : values) v->reinit(static_cast<int>(c));
    double cell_sum = 0.0;
    for (int q = 0; q < values.front()->n_points(); ++q) {
      for (std::size_t k = 0; k < fields.size(); ++k) {
        const CellValues& cv = *values[k];
        const Vector& coeffs = fields[k]->coefficients();
        if (fields[k]->space().components() == 2) {
          samples[k].value = cv.vector_value(coeffs, q);
          samples[k].gradient = cv.vector_gradient(coeffs, q);
        } else {
          samples[k].value = {cv.scalar_value(coeffs, q), 0.0};
          samples[k].gradient.setZero();
          samples[k].gradient.row(0) = cv.scalar_gradient(coeffs, q).transpose();
        }
      }
      cell_sum += integrand(values.front()->point(q), samples) * values.front()->JxW(q);
    }
    total += cell_sum;
  }
  return total;
}

double integrate(const Mesh& mesh, const std::function<double(const Point&)>& f,
                 int quadrature_degree) {
  const QuadratureRule rule = quadrature_rule(quadrature_degree);
  double total = 0.0;
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const CellGeometry g = CellGeometry::of(mesh, static_cast<int>(c));
    double cell_sum = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      cell_sum += f(g.map(rule.points[q])) * rule.weights[q];
    }
    total += cell_sum * g.det;
  }
  return total;
}

}  // namespace lmles
