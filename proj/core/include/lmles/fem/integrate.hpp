#pragma once

#include <functional>
#include <span>

#include <Eigen/Core>

#include "lmles/fem/fe_field.hpp"

namespace lmles {

/// Value and gradient of one field at a quadrature point. Scalar fields use
/// value(0) and gradient.row(0).
struct FieldSample {
  Eigen::Vector2d value = Eigen::Vector2d::Zero();
  Eigen::Matrix2d gradient = Eigen::Matrix2d::Zero();
};

using FieldIntegrand = std::function<double(const Point&, std::span<const FieldSample>)>;

/// Sum over cells of the mapped quadrature of `integrand` evaluated on the
/// given fields. All fields must live on the same mesh.
double integrate_field(std::span<const FeField* const> fields, const FieldIntegrand& integrand,
                       int quadrature_degree);

/// Quadrature of a closed-form function over a mesh.
double integrate(const Mesh& mesh, const std::function<double(const Point&)>& f,
                 int quadrature_degree);

}  // namespace lmles
