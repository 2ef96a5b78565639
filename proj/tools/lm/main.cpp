#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "commands.hpp"
#include "lmles/error.hpp"
#include "run_config.hpp"

namespace {

template <class T>
void put(nlohmann::json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ladyzhenskaya-model LES solver: Taylor-Green and step-channel benchmarks"};
  app.set_version_flag("--version", "lm 0.1.0");

  std::string benchmark;
  app.add_option("benchmark", benchmark, "taylor-green | step | convergence")
      ->required()
      ->check(CLI::IsMember({"taylor-green", "step", "convergence"}));

  std::optional<std::string> config_file, formulation, delta, r, out, outflow;
  std::optional<int> m, threads, max_iters, picard_iters;
  std::optional<std::vector<int>> m_list;
  std::optional<double> h_target, s, cs, re, dt, t_end, eps, omega, vtk_interval, nl_tol, lin_tol;
  std::optional<bool> csv, vtk, reuse, picard;

  app.add_option("--config", config_file, "flat JSON file of key-value settings (CLI wins)");
  app.add_option("--m", m, "subdivisions per side of the unit square");
  app.add_option("--m-list", m_list, "mesh parameters of a convergence study")->delimiter(',');
  app.add_option("--h-target", h_target, "step-channel mesh size");
  app.add_option("--formulation", formulation, "emac | skew");
  app.add_option("--s", s, "viscosity exponent s");
  app.add_option("--r", r, "exponent r, or 4/3+s");
  app.add_option("--cs", cs, "Smagorinsky constant C_S");
  app.add_option("--delta", delta, "filter width, or 1/m");
  app.add_option("--re", re, "Reynolds number");
  app.add_option("--eps", eps, "regularization inside the Frobenius norm");
  app.add_option("--omega", omega, "vortex array size of the Taylor-Green solution");
  app.add_option("--dt", dt, "time step");
  app.add_option("--t-end", t_end, "final time");
  app.add_option("--nonlinear-tol", nl_tol, "absolute residual tolerance of each step");
  app.add_option("--nonlinear-max-iters", max_iters, "Newton iteration limit");
  app.add_option("--picard-fallback", picard, "retry failed steps with Picard (true/false)");
  app.add_option("--picard-max-iters", picard_iters, "Picard iteration limit");
  app.add_option("--linear-tol", lin_tol, "relative tolerance of linear solves");
  app.add_option("--reuse-jacobian", reuse, "keep the Newton factorization across steps (true/false)");
  app.add_option("--outflow", outflow, "do-nothing | no-penetration")
      ->check(CLI::IsMember({"do-nothing", "no-penetration"}));
  app.add_option("--out", out, "output directory");
  app.add_option("--threads", threads, "assembly threads; 1 is bit-reproducible");
  app.add_option("--csv", csv, "write quantities.csv (true/false)");
  app.add_option("--vtk", vtk, "write VTK snapshots (true/false)");
  app.add_option("--vtk-interval", vtk_interval, "time between VTK snapshots");

  CLI11_PARSE(app, argc, argv);

  nlohmann::json cli;
  put(cli, "formulation", formulation);
  put(cli, "delta", delta);
  put(cli, "out", out);
  put(cli, "outflow", outflow);
  put(cli, "m", m);
  put(cli, "threads", threads);
  put(cli, "nonlinear_max_iters", max_iters);
  put(cli, "picard_max_iters", picard_iters);
  put(cli, "m_list", m_list);
  put(cli, "h_target", h_target);
  put(cli, "s", s);
  put(cli, "cs", cs);
  put(cli, "re", re);
  put(cli, "dt", dt);
  put(cli, "t_end", t_end);
  put(cli, "eps", eps);
  put(cli, "omega", omega);
  put(cli, "vtk_interval", vtk_interval);
  put(cli, "nonlinear_tol", nl_tol);
  put(cli, "linear_tol", lin_tol);
  put(cli, "csv", csv);
  put(cli, "vtk", vtk);
  put(cli, "reuse_jacobian", reuse);
  put(cli, "picard_fallback", picard);
  if (r) {
    // numbers stay numbers so the config keeps its type
    try {
      std::size_t used = 0;
      const double v = std::stod(*r, &used);
      cli["r"] = used == r->size() ? nlohmann::json(v) : nlohmann::json(*r);
    } catch (const std::exception&) {
      cli["r"] = *r;
    }
  }
  if (delta) {
    try {
      std::size_t used = 0;
      const double v = std::stod(*delta, &used);
      if (used == delta->size()) cli["delta"] = v;
    } catch (const std::exception&) {
    }
  }

  lm::RunConfig config;
  try {
    const lm::Benchmark b = lm::parse_benchmark(benchmark);
    config = lm::defaults_for(b);
    if (config_file) lm::apply_settings(config, lm::load_json(*config_file));
    lm::apply_settings(config, cli);
    config.benchmark = b;
  } catch (const lmles::Error& e) {
    std::cerr << "lm: " << e.what() << '\n';
    return lm::kBadConfig;
  }
  return lm::run(config, std::cout, std::cerr);
}
