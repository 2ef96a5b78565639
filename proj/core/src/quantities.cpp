#include "lmles/diagnostics/quantities.hpp"

#include <array>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "lmles/error.hpp"
#include "lmles/fem/integrate.hpp"

namespace lmles {

namespace {

void require_vector(const FeField& w) {
  if (w.space().components() != 2) throw InvalidArgument("expected a velocity field");
}

}  // namespace

double kinetic_energy(const FeField& w) {
  require_vector(w);
  const std::array<const FeField*, 1> f{&w};
  return 0.5 * integrate_field(
                   f, [](const Point&, std::span<const FieldSample> s) { return s[0].value.squaredNorm(); },
                   4);
}

Eigen::Vector2d momentum(const FeField& w) {
  require_vector(w);
  const std::array<const FeField*, 1> f{&w};
  const double mx = integrate_field(
      f, [](const Point&, std::span<const FieldSample> s) { return s[0].value.x(); }, 2);
  const double my = integrate_field(
      f, [](const Point&, std::span<const FieldSample> s) { return s[0].value.y(); }, 2);
  return {mx, my};
}

double angular_momentum(const FeField& w) {
  require_vector(w);
  const std::array<const FeField*, 1> f{&w};
  return integrate_field(
      f,
      [](const Point& x, std::span<const FieldSample> s) {
        return x.x() * s[0].value.y() - x.y() * s[0].value.x();
      },
      4);
}

void QuantityLog::push(const QuantityRecord& record) {
  if (!records_.empty() && !(record.time > records_.back().time)) {
    throw ValidationError("QuantityLog: times must strictly increase");
  }
  records_.push_back(record);
}

void QuantityLog::write_csv_header(std::ostream& out) {
  out << "step,time,energy,momentum_x,momentum_y,angular_momentum,div_residual,newton_iters\n";
}

void QuantityLog::write_csv_row(std::ostream& out, const QuantityRecord& r) {
  const auto old = out.precision(17);
  out << r.step << ',' << r.time << ',' << r.energy << ',' << r.momentum.x() << ','
      << r.momentum.y() << ',' << r.angular_momentum << ',' << r.div_residual << ','
      << r.newton_iters << '\n';
  out.precision(old);
}

void QuantityLog::write_csv(std::ostream& out) const {
  write_csv_header(out);
  for (const auto& r : records_) write_csv_row(out, r);
}

QuantityLog QuantityLog::read_csv(std::istream& in) {
  QuantityLog log;
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw ParseError("empty quantity log", 1);
  ++line_no;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::array<std::string, 8> cols;
    for (auto& c : cols) {
      if (!std::getline(ss, c, ',')) throw ParseError("expected 8 columns", line_no);
    }
    try {
      QuantityRecord r;
      r.step = std::stoi(cols[0]);
      r.time = std::stod(cols[1]);
      r.energy = std::stod(cols[2]);
      r.momentum = {std::stod(cols[3]), std::stod(cols[4])};
      r.angular_momentum = std::stod(cols[5]);
      r.div_residual = std::stod(cols[6]);
      r.newton_iters = std::stoi(cols[7]);
      log.push(r);
    } catch (const std::logic_error&) {
      throw ParseError("malformed number", line_no);
    }
  }
  return log;
}

QuantityRecord measure(const FeField& w, int step, double time, double div_residual,
                       int newton_iters) {
  QuantityRecord r;
  r.step = step;
  r.time = time;
  r.energy = kinetic_energy(w);
  r.momentum = momentum(w);
  r.angular_momentum = angular_momentum(w);
  r.div_residual = div_residual;
  r.newton_iters = newton_iters;
  return r;
}

}  // namespace lmles
