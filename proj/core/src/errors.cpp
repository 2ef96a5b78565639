#include "lmles/diagnostics/errors.hpp"

#include <array>
#include <cmath>

#include "lmles/error.hpp"
#include "lmles/fem/integrate.hpp"

namespace lmles {

double H1ErrorParts::h1() const { return std::sqrt(l2_squared + semi_squared); }

H1ErrorParts h1_error(const FeField& w, const ExactVelocity& exact, double t, int degree) {
  if (w.space().components() != 2) throw InvalidArgument("h1_error: expected a velocity field");
  const std::array<const FeField*, 1> f{&w};
  H1ErrorParts parts;
  parts.l2_squared = integrate_field(
      f,
      [&](const Point& x, std::span<const FieldSample> s) {
        return (exact(x, t).value - s[0].value).squaredNorm();
      },
      degree);
  parts.semi_squared = integrate_field(
      f,
      [&](const Point& x, std::span<const FieldSample> s) {
        return (exact(x, t).gradient - s[0].gradient).squaredNorm();
      },
      degree);
  return parts;
}

ErrorAccumulator::ErrorAccumulator(ExactVelocity exact, double dt, int degree)
    : exact_(std::move(exact)), dt_(dt), degree_(degree) {
  if (!(dt_ > 0.0)) throw InvalidArgument("ErrorAccumulator: dt must be > 0");
}

void ErrorAccumulator::add(double t, const FeField& w) {
  const H1ErrorParts parts = h1_error(w, exact_, t, degree_);
  sum_ += (parts.l2_squared + parts.semi_squared) * dt_;
  linf_l2_ = std::max(linf_l2_, std::sqrt(parts.l2_squared));
  ++samples_;
}

double ErrorAccumulator::l2t_h1() const { return std::sqrt(sum_); }

double error_l2t_h1(std::span<const std::pair<double, FeField>> trajectory,
                    const ExactVelocity& exact, double dt) {
  ErrorAccumulator acc(exact, dt);
  for (const auto& [t, w] : trajectory) acc.add(t, w);
  return acc.l2t_h1();
}

std::vector<std::optional<double>> convergence_rates(std::span<const ErrorRecord> records) {
  if (records.size() < 2) throw InvalidArgument("convergence_rates: need at least two records");
  std::vector<std::optional<double>> rates(records.size());
  for (std::size_t k = 1; k < records.size(); ++k) {
    const auto& prev = records[k - 1];
    const auto& cur = records[k];
    if (prev.m == cur.m || prev.m <= 0 || cur.m <= 0) {
      throw InvalidArgument("convergence_rates: mesh parameters must be positive and distinct");
    }
    if (prev.l2t_h1 > 0.0 && cur.l2t_h1 > 0.0) {
      rates[k] = std::log(prev.l2t_h1 / cur.l2t_h1) /
                 std::log(static_cast<double>(cur.m) / static_cast<double>(prev.m));
    }
  }
  return rates;
}

FeField recover_pressure(const FeField& modified_pressure, const FeField& w, Formulation formulation) {
  if (formulation != Formulation::Emac) {
    throw InvalidArgument("recover_pressure: SKEW runs already carry the kinematic pressure");
  }
  const FunctionSpace& ps = modified_pressure.space();
  const FunctionSpace& vs = w.space();
  if (ps.family() != Family::ScalarP1 || vs.family() != Family::VectorP2 || !ps.same_mesh(vs)) {
    throw SpaceMismatch("recover_pressure: expects P1 pressure and P2 velocity on one mesh");
  }
  // Pressure nodes are the mesh vertices, which are also the first velocity nodes.
  Vector p = modified_pressure.coefficients();
  const Vector& u = w.coefficients();
  for (Eigen::Index k = 0; k < p.size(); ++k) {
    p[k] += 0.5 * (u[2 * k] * u[2 * k] + u[2 * k + 1] * u[2 * k + 1]);
  }
  return FeField(modified_pressure.space_ptr(), std::move(p));
}

}  // namespace lmles
