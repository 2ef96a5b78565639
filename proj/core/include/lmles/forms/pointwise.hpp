#pragma once

#include <Eigen/Core>

#include "lmles/forms/model_params.hpp"

namespace lmles {

/// (C_S delta)^r * (|G|_F^2 + eps^2)^(s/2)
double smagorinsky_viscosity(const Eigen::Matrix2d& grad_w, const ModelParams& params);

/// (|A|_F^s A - |B|_F^s B) : (A - B), nonnegative for every s > 0.
double check_pointwise_monotonicity(const Eigen::Matrix2d& a, const Eigen::Matrix2d& b, double s);

}  // namespace lmles
