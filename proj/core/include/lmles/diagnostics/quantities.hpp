#pragma once

#include <iosfwd>
#include <vector>

#include <Eigen/Core>

#include "lmles/fem/fe_field.hpp"

namespace lmles {

/// 1/2 int |w|^2
double kinetic_energy(const FeField& w);
/// (int w_1, int w_2)
Eigen::Vector2d momentum(const FeField& w);
/// int (x w_2 - y w_1), about the origin.
double angular_momentum(const FeField& w);

struct QuantityRecord {
  int step = 0;
  double time = 0.0;
  double energy = 0.0;
  Eigen::Vector2d momentum = Eigen::Vector2d::Zero();
  double angular_momentum = 0.0;
  double div_residual = 0.0;
  int newton_iters = 0;
};

/// Per-step conserved-quantity history; times strictly increase.
class QuantityLog {
 public:
  void push(const QuantityRecord& record);
  const std::vector<QuantityRecord>& records() const noexcept { return records_; }
  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }
  const QuantityRecord& back() const { return records_.back(); }

  /// Header `step,time,energy,momentum_x,momentum_y,angular_momentum,div_residual,newton_iters`,
  /// 17 significant digits.
  void write_csv(std::ostream& out) const;
  static void write_csv_header(std::ostream& out);
  static void write_csv_row(std::ostream& out, const QuantityRecord& r);
  static QuantityLog read_csv(std::istream& in);

 private:
  std::vector<QuantityRecord> records_;
};

/// Record for one state: quadrature of every tracked quantity.
QuantityRecord measure(const FeField& w, int step, double time, double div_residual,
                       int newton_iters);

}  // namespace lmles
