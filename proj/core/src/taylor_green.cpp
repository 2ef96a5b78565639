#include "lmles/diagnostics/taylor_green.hpp"

#include <cmath>
#include <numbers>

namespace lmles {

TaylorGreenSample taylor_green_exact(double omega, double reynolds, double x, double y, double t) {
  const double k = omega * std::numbers::pi;
  const double decay = std::exp(-2.0 * k * k * t / reynolds);
  const double sx = std::sin(k * x);
  const double cx = std::cos(k * x);
  const double sy = std::sin(k * y);
  const double cy = std::cos(k * y);

  TaylorGreenSample s;
  s.velocity = {-sy * cx * decay, cy * sx * decay};
  s.pressure = -(std::cos(2.0 * k * y) + std::cos(2.0 * k * x)) / 4.0 * decay * decay;
  s.gradient << k * sy * sx * decay, -k * cy * cx * decay,
                k * cy * cx * decay, -k * sy * sx * decay;
  return s;
}

}  // namespace lmles
