#pragma once

#include <vector>

#include <Eigen/Core>
#include <Eigen/LU>

#include "lmles/fem/fe_field.hpp"
#include "lmles/fem/function_space.hpp"
#include "lmles/fem/quadrature.hpp"

namespace lmles {

/// Affine map of one cell from the reference triangle.
struct CellGeometry {
  Point origin;
  Eigen::Matrix2d jacobian;
  Eigen::Matrix2d inverse_transpose;
  double det = 0.0;

  static CellGeometry of(const Mesh& mesh, int cell);
  Point map(const Eigen::Vector2d& local) const { return origin + jacobian * local; }
};

/// Shape functions of a space mapped to one cell at the points of a rule.
/// reinit() recomputes geometry, physical points, JxW and shape gradients.
class CellValues {
 public:
  CellValues(const FunctionSpace& space, QuadratureRule rule);

  void reinit(int cell);

  int cell() const noexcept { return cell_; }
  int n_points() const noexcept { return static_cast<int>(rule_.size()); }
  int n_shapes() const noexcept { return n_shapes_; }
  const QuadratureRule& rule() const noexcept { return rule_; }

  double JxW(int q) const { return jxw_[q]; }
  const Point& point(int q) const { return points_[q]; }
  double shape(int q, int a) const { return values_[q * n_shapes_ + a]; }
  const Eigen::Vector2d& shape_grad(int q, int a) const { return grads_[q * n_shapes_ + a]; }

  double scalar_value(const Vector& coeffs, int q) const;
  Eigen::Vector2d scalar_gradient(const Vector& coeffs, int q) const;
  Eigen::Vector2d vector_value(const Vector& coeffs, int q) const;
  /// (i, j) entry is d u_i / d x_j.
  Eigen::Matrix2d vector_gradient(const Vector& coeffs, int q) const;

 private:
  const FunctionSpace& space_;
  QuadratureRule rule_;
  int n_shapes_;
  int cell_ = -1;
  std::vector<double> values_;
  std::vector<Eigen::Vector2d> ref_grads_;
  std::vector<Eigen::Vector2d> grads_;
  std::vector<double> jxw_;
  std::vector<Point> points_;
};

}  // namespace lmles
