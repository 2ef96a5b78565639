#include "commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "lmles/diagnostics/errors.hpp"
#include "lmles/diagnostics/taylor_green.hpp"
#include "lmles/error.hpp"
#include "vtk.hpp"

namespace lm {

namespace fs = std::filesystem;
using lmles::Observer;
using lmles::SolverState;

namespace {

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw lmles::Error("cannot open " + path.string() + " for writing");
  out << std::setprecision(17);
  return out;
}

// Streams one CSV row per logged record and flushes, so a failed run keeps
// everything up to the last accepted step.
Observer csv_observer(std::ofstream& out) {
  lmles::QuantityLog::write_csv_header(out);
  return [&out](int, double, const SolverState& s) {
    lmles::QuantityLog::write_csv_row(out, s.log.back());
    out.flush();
  };
}

// VTK at t = 0, whenever a multiple of the interval is reached, and at t_end.
Observer vtk_observer(const RunConfig& c, const fs::path& dir) {
  fs::create_directories(dir);
  const int last = c.time.num_steps();
  return [&c, dir, last, next = 0.0](int step, double t, const SolverState& s) mutable {
    if (t + 1e-9 * c.time.dt >= next || step == last) {
      std::ostringstream name;
      name << "state_" << std::setw(6) << std::setfill('0') << step << ".vtk";
      write_vtk(s, dir / name.str());
      while (next <= t + 1e-9 * c.time.dt) next += c.vtk_interval;
    }
  };
}

lmles::ExactVelocity taylor_green(double omega, double re) {
  return [omega, re](const lmles::Point& x, double t) {
    const auto s = lmles::taylor_green_exact(omega, re, x.x(), x.y(), t);
    return lmles::ExactVelocitySample{s.velocity, s.gradient};
  };
}

void write_summary(const fs::path& path, const RunConfig& c, const TaylorGreenResult& r) {
  nlohmann::json j;
  j["m"] = r.m;
  j["formulation"] = std::string(lmles::to_string(c.params.formulation));
  j["s"] = c.params.exponent_s;
  j["l2t_h1_error"] = r.l2t_h1;
  j["linf_l2_error"] = r.linf_l2;
  j["steps"] = r.final_state.step;
  j["max_div_residual"] = r.max_div_residual;
  auto out = open_out(path);
  out << j.dump(2) << '\n';
  if (!out) throw lmles::Error("failed writing " + path.string());
}

}  // namespace

TaylorGreenResult run_taylor_green(const RunConfig& c, int m, std::span<const Observer> observers) {
  auto mesh = std::make_shared<const lmles::Mesh>(lmles::unit_square_mesh(m));
  const lmles::ModelParams params = c.params_for(m);
  const auto exact = taylor_green(c.omega, params.reynolds);
  const auto bcs = lmles::BoundaryConditions::dirichlet(
      [exact](const lmles::Point& x, double t) { return exact(x, t).value; });
  lmles::TimeStepper stepper(mesh, params, bcs, c.time);

  lmles::ErrorAccumulator acc(exact, c.time.dt);
  double max_div = 0.0;
  std::vector<Observer> obs(observers.begin(), observers.end());
  obs.push_back([&](int, double t, const SolverState& s) {
    acc.add(t, s.velocity);
    max_div = std::max(max_div, s.log.back().div_residual);
  });
  SolverState final_state =
      stepper.run(stepper.initial_state([&](const lmles::Point& x) { return exact(x, 0.0).value; }), obs);
  return {m, acc.l2t_h1(), acc.linf_l2(), max_div, std::move(final_state)};
}

std::shared_ptr<const lmles::Mesh> step_mesh(const RunConfig& c) {
  return std::make_shared<const lmles::Mesh>(lmles::step_channel_mesh(c.h_target));
}

lmles::BoundaryConditions step_boundary_conditions(const RunConfig& c) {
  return lmles::BoundaryConditions::channel(
      [](const lmles::Point& x) { return Eigen::Vector2d(x.y() * (10.0 - x.y()) / 25.0, 0.0); },
      c.no_penetration_outflow);
}

SolverState run_step(const RunConfig& c, std::span<const Observer> observers) {
  lmles::TimeStepper stepper(step_mesh(c), c.params_for(c.m), step_boundary_conditions(c), c.time);
  return stepper.run(stepper.initial_state([](const lmles::Point&) { return Eigen::Vector2d::Zero(); }),
                     observers);
}

int cmd_taylor_green(const RunConfig& c, std::ostream& log) {
  std::ofstream csv;
  std::vector<Observer> obs;
  if (c.csv) {
    csv = open_out(c.out / "quantities.csv");
    obs.push_back(csv_observer(csv));
  }
  if (c.vtk) obs.push_back(vtk_observer(c, c.out / "vtk"));
  const TaylorGreenResult r = run_taylor_green(c, c.m, obs);
  write_summary(c.out / "error_summary.json", c, r);
  log << std::setprecision(6) << "taylor-green m=" << r.m << " " << lmles::to_string(c.params.formulation)
      << " s=" << c.params.exponent_s << ": l2(0,T;H1) error " << std::scientific << r.l2t_h1
      << ", max div residual " << r.max_div_residual << '\n';
  return kOk;
}

int cmd_convergence(const RunConfig& c, std::ostream& log) {
  std::vector<lmles::ErrorRecord> records;
  const fs::path table = c.out / "convergence.csv";
  for (int m : c.m_list) {
    const TaylorGreenResult r = run_taylor_green(c, m);
    records.push_back({m, r.l2t_h1, r.linf_l2, {}});
    const auto rates = records.size() >= 2 ? lmles::convergence_rates(records)
                                           : std::vector<std::optional<double>>(1);
    // Rewritten after every mesh so a failure keeps the finished rows.
    auto out = open_out(table);
    out << "m,error,rate\n";
    for (std::size_t k = 0; k < records.size(); ++k) {
      out << records[k].m << ',' << records[k].l2t_h1 << ',';
      if (rates[k]) out << *rates[k];
      out << '\n';
    }
    out.flush();
    if (!out) throw lmles::Error("failed writing " + table.string());
    log << "m=" << m << " error " << std::scientific << std::setprecision(5) << r.l2t_h1;
    if (rates.back()) log << std::fixed << std::setprecision(2) << " rate " << *rates.back();
    log << std::defaultfloat << '\n';
  }
  return kOk;
}

int cmd_step(const RunConfig& c, std::ostream& log) {
  std::ofstream csv;
  std::vector<Observer> obs;
  if (c.csv) {
    csv = open_out(c.out / "quantities.csv");
    obs.push_back(csv_observer(csv));
  }
  if (c.vtk) obs.push_back(vtk_observer(c, c.out / "vtk"));
  const int every = std::max(1, c.time.num_steps() / 20);
  obs.push_back([&log, every](int step, double t, const SolverState& s) {
    if (step % every != 0) return;
    const auto& r = s.log.back();
    log << std::setprecision(8) << "t=" << t << " energy " << r.energy << " momentum (" << r.momentum.x()
        << ", " << r.momentum.y() << ") angular " << r.angular_momentum << '\n';
  });
  run_step(c, obs);
  return kOk;
}

int run(const RunConfig& c, std::ostream& log, std::ostream& err) {
  try {
    c.validate();
  } catch (const lmles::Error& e) {
    err << "lm: invalid configuration: " << e.what() << '\n';
    return kBadConfig;
  }
  try {
    fs::create_directories(c.out);
    {
      auto out = open_out(c.out / "config.resolved");
      out << to_json(c).dump(2) << '\n';
      if (!out) throw lmles::Error("failed writing config.resolved");
    }
    switch (c.benchmark) {
      case Benchmark::TaylorGreen: return cmd_taylor_green(c, log);
      case Benchmark::Convergence: return cmd_convergence(c, log);
      case Benchmark::Step: return cmd_step(c, log);
    }
  } catch (const lmles::StepFailure& e) {
    err << "lm: " << e.what() << '\n';
    return kStepFailure;
  } catch (const lmles::InvalidArgument& e) {
    err << "lm: " << e.what() << '\n';
    return kBadConfig;
  } catch (const std::exception& e) {
    err << "lm: " << e.what() << '\n';
    return kIoError;
  }
  return kOk;
}

}  // namespace lm
