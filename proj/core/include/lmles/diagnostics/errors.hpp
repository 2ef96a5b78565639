#pragma once

#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "lmles/fem/fe_field.hpp"
#include "lmles/forms/model_params.hpp"

namespace lmles {

struct ExactVelocitySample {
  Eigen::Vector2d value;
  Eigen::Matrix2d gradient;
};

using ExactVelocity = std::function<ExactVelocitySample(const Point&, double t)>;

/// Squared L2 and H1-seminorm parts of u(t) - w, by quadrature against the
/// closed form (not its interpolant).
struct H1ErrorParts {
  double l2_squared = 0.0;
  double semi_squared = 0.0;
  double h1() const;
};

H1ErrorParts h1_error(const FeField& w, const ExactVelocity& exact, double t, int degree = 8);

/// Accumulates (sum_n ||u(t^n) - w^n||_{H1}^2 dt)^{1/2} over n = 0..M and the
/// companion max_n ||u(t^n) - w^n||_{L2}.
class ErrorAccumulator {
 public:
  ErrorAccumulator(ExactVelocity exact, double dt, int degree = 8);

  void add(double t, const FeField& w);

  double l2t_h1() const;
  double linf_l2() const { return linf_l2_; }
  int samples() const noexcept { return samples_; }

 private:
  ExactVelocity exact_;
  double dt_;
  int degree_;
  double sum_ = 0.0;
  double linf_l2_ = 0.0;
  int samples_ = 0;
};

/// Discrete l2(0,T;H1) error of a stored trajectory of (t^n, w^n).
double error_l2t_h1(std::span<const std::pair<double, FeField>> trajectory,
                    const ExactVelocity& exact, double dt);

struct ErrorRecord {
  int m = 0;
  double l2t_h1 = 0.0;
  std::optional<double> linf_l2;
  std::optional<double> rate;
};

/// rate_k = log(e_{k-1} / e_k) / log(m_k / m_{k-1}); the first entry and any
/// entry involving a zero error are empty.
std::vector<std::optional<double>> convergence_rates(std::span<const ErrorRecord> records);

/// Kinematic pressure p = P + |w|^2 / 2 at the pressure nodes of an EMAC run.
/// Throws InvalidArgument for SKEW, where the unknown already is p.
FeField recover_pressure(const FeField& modified_pressure, const FeField& w, Formulation formulation);

}  // namespace lmles
