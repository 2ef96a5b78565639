#include "lmles/forms/pointwise.hpp"

#include <cmath>
#include <string>

#include "lmles/error.hpp"

namespace lmles {

std::string_view to_string(Formulation f) { return f == Formulation::Emac ? "emac" : "skew"; }

Formulation parse_formulation(std::string_view text) {
  if (text == "emac" || text == "EMAC") return Formulation::Emac;
  if (text == "skew" || text == "SKEW") return Formulation::Skew;
  throw InvalidArgument("unknown formulation '" + std::string(text) + "' (expected emac or skew)");
}

double ModelParams::model_coefficient() const {
  const double cd = smagorinsky_constant * filter_width;
  return cd == 0.0 ? 0.0 : std::pow(cd, exponent_r);
}

void ModelParams::validate() const {
  if (!(reynolds > 0.0) || !std::isfinite(reynolds)) throw InvalidArgument("reynolds must be > 0");
  if (!(smagorinsky_constant >= 0.0)) throw InvalidArgument("smagorinsky constant must be >= 0");
  if (!(filter_width >= 0.0)) throw InvalidArgument("filter width must be >= 0");
  if (!(exponent_r > 0.0)) throw InvalidArgument("exponent r must be > 0");
  if (!(exponent_s > 0.0)) throw InvalidArgument("exponent s must be > 0");
  if (!(regularization_eps >= 0.0)) throw InvalidArgument("regularization eps must be >= 0");
}

std::vector<std::string> ModelParams::warnings() const {
  std::vector<std::string> out;
  if (exponent_s < 0.2) {
    out.push_back("exponent s = " + std::to_string(exponent_s) +
                  " is below 1/5; well-posedness of the model is not guaranteed");
  }
  return out;
}

double smagorinsky_viscosity(const Eigen::Matrix2d& grad_w, const ModelParams& params) {
  const double coefficient = params.model_coefficient();
  if (coefficient == 0.0) return 0.0;
  const double n2 = grad_w.squaredNorm() + params.regularization_eps * params.regularization_eps;
  return coefficient * std::pow(n2, 0.5 * params.exponent_s);
}

double check_pointwise_monotonicity(const Eigen::Matrix2d& a, const Eigen::Matrix2d& b, double s) {
  const Eigen::Matrix2d flux = std::pow(a.norm(), s) * a - std::pow(b.norm(), s) * b;
  return (flux.array() * (a - b).array()).sum();
}

}  // namespace lmles
