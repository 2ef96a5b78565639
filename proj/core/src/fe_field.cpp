#include "lmles/fem/fe_field.hpp"

#include <cmath>
#include <string>

#include "lmles/error.hpp"

namespace lmles {

FeField::FeField(std::shared_ptr<const FunctionSpace> space)
    : space_(std::move(space)), coefficients_(Vector::Zero(space_->dof_count())) {}

FeField::FeField(std::shared_ptr<const FunctionSpace> space, Vector coefficients)
    : space_(std::move(space)), coefficients_(std::move(coefficients)) {
  check();
}

void FeField::check() const {
  if (coefficients_.size() != space_->dof_count()) {
    throw ValidationError("FeField: " + std::to_string(coefficients_.size()) +
                          " coefficients for a space with " +
                          std::to_string(space_->dof_count()) + " dofs");
  }
  if (!coefficients_.allFinite()) throw ValidationError("FeField: non-finite coefficient");
}

FeField interpolate(std::shared_ptr<const FunctionSpace> space, const ScalarFunction& f) {
  if (space->components() != 1) {
    throw InvalidArgument("interpolate: scalar function into a vector space");
  }
  Vector coeffs(space->dof_count());
  const auto& nodes = space->node_coordinates();
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const double v = f(nodes[k]);
    if (!std::isfinite(v)) {
      throw InvalidArgument("interpolate: non-finite value at node " + std::to_string(k));
    }
    coeffs[static_cast<Eigen::Index>(k)] = v;
  }
  return FeField(std::move(space), std::move(coeffs));
}

FeField interpolate(std::shared_ptr<const FunctionSpace> space, const VectorFunction& f) {
  if (space->components() != 2) {
    throw InvalidArgument("interpolate: vector function into a scalar space");
  }
  Vector coeffs(space->dof_count());
  const auto& nodes = space->node_coordinates();
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const Eigen::Vector2d v = f(nodes[k]);
    if (!v.allFinite()) {
      throw InvalidArgument("interpolate: non-finite value at node " + std::to_string(k));
    }
    coeffs[static_cast<Eigen::Index>(2 * k)] = v.x();
    coeffs[static_cast<Eigen::Index>(2 * k + 1)] = v.y();
  }
  return FeField(std::move(space), std::move(coeffs));
}

}  // namespace lmles
