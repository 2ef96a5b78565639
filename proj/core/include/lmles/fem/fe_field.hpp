#pragma once

#include <functional>
#include <memory>

#include <Eigen/Core>

#include "lmles/fem/function_space.hpp"

namespace lmles {

using Vector = Eigen::VectorXd;

/// Finite element function: a space plus its coefficient vector.
class FeField {
 public:
  explicit FeField(std::shared_ptr<const FunctionSpace> space);
  FeField(std::shared_ptr<const FunctionSpace> space, Vector coefficients);

  const FunctionSpace& space() const noexcept { return *space_; }
  const std::shared_ptr<const FunctionSpace>& space_ptr() const noexcept { return space_; }

  const Vector& coefficients() const noexcept { return coefficients_; }
  Vector& coefficients() noexcept { return coefficients_; }

  /// Throws ValidationError when the length or finiteness invariant is broken.
  void check() const;

 private:
  std::shared_ptr<const FunctionSpace> space_;
  Vector coefficients_;
};

using ScalarFunction = std::function<double(const Point&)>;
using VectorFunction = std::function<Eigen::Vector2d(const Point&)>;

/// Nodal interpolation at the Lagrange nodes of a scalar space.
FeField interpolate(std::shared_ptr<const FunctionSpace> space, const ScalarFunction& f);
/// Nodal interpolation, per component, into a VectorP2 space.
FeField interpolate(std::shared_ptr<const FunctionSpace> space, const VectorFunction& f);

}  // namespace lmles
