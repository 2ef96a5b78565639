#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace lmles {

/// Treatment of the nonlinear term: skew-symmetrized convection b* or the
/// energy/momentum/angular-momentum conserving form c.
enum class Formulation : std::uint8_t { Skew, Emac };

std::string_view to_string(Formulation f);
Formulation parse_formulation(std::string_view text);

/// Parameters of the Ladyzhenskaya model
///   w_t - div((Re^-1 + (C_S delta)^r |grad w|_F^s) grad w) + grad p + (w.grad) w = f.
struct ModelParams {
  double reynolds = 100.0;
  double smagorinsky_constant = 0.01;
  double filter_width = 1.0 / 16.0;
  double exponent_r = 4.0 / 3.0 + 1.0;
  double exponent_s = 1.0;
  Formulation formulation = Formulation::Emac;
  /// Added inside the Frobenius norm, sqrt(|G|^2 + eps^2), so the Newton
  /// derivative exists at grad w = 0 when s < 2.
  double regularization_eps = 1e-10;

  /// (C_S delta)^r
  double model_coefficient() const;

  /// Throws InvalidArgument on violated invariants.
  void validate() const;
  /// Non-fatal concerns, e.g. s below the 1/5 well-posedness threshold.
  std::vector<std::string> warnings() const;
};

}  // namespace lmles
