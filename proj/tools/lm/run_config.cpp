#include "run_config.hpp"

#include <fstream>
#include <set>

#include "lmles/error.hpp"

namespace lm {

using lmles::InvalidArgument;
using nlohmann::json;

std::string to_string(Benchmark b) {
  switch (b) {
    case Benchmark::TaylorGreen: return "taylor-green";
    case Benchmark::Step: return "step";
    case Benchmark::Convergence: return "convergence";
  }
  return "?";
}

Benchmark parse_benchmark(const std::string& text) {
  if (text == "taylor-green") return Benchmark::TaylorGreen;
  if (text == "step") return Benchmark::Step;
  if (text == "convergence") return Benchmark::Convergence;
  throw InvalidArgument("unknown benchmark '" + text + "'");
}

lmles::ModelParams RunConfig::params_for(int mesh_m) const {
  lmles::ModelParams p = params;
  if (delta_from_m) p.filter_width = 1.0 / mesh_m;
  if (r_from_s) p.exponent_r = 4.0 / 3.0 + p.exponent_s;
  return p;
}

void RunConfig::validate() const {
  if (m < 1) throw InvalidArgument("m must be >= 1");
  if (benchmark == Benchmark::Convergence) {
    if (m_list.size() < 2) throw InvalidArgument("convergence needs at least two mesh parameters");
    std::set<int> seen(m_list.begin(), m_list.end());
    if (seen.size() != m_list.size() || *seen.begin() < 1) {
      throw InvalidArgument("m_list entries must be distinct and positive");
    }
  }
  if (!(h_target > 0.0 && h_target <= 1.0)) throw InvalidArgument("h_target must lie in (0, 1]");
  if (!(vtk_interval > 0.0)) throw InvalidArgument("vtk_interval must be positive");
  params_for(m).validate();
  time.validate();
}

RunConfig defaults_for(Benchmark b) {
  RunConfig c;
  c.benchmark = b;
  if (b == Benchmark::Step) {
    c.params.reynolds = 1e4;
    c.params.filter_width = 0.01;
    c.delta_from_m = false;
    c.time.dt = 0.01;
    c.time.t_end = 40.0;
    c.time.reuse_jacobian = true;
    c.vtk = true;
  }
  return c;
}

namespace {

template <class T>
T get(const json& v, const std::string& key) {
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    throw InvalidArgument("config key '" + key + "' has the wrong type");
  }
}

}  // namespace

void apply_settings(RunConfig& c, const json& values) {
  if (!values.is_object()) throw InvalidArgument("config must be a flat JSON object");
  for (const auto& [key, v] : values.items()) {
    if (key == "benchmark") c.benchmark = parse_benchmark(get<std::string>(v, key));
    else if (key == "formulation") c.params.formulation = lmles::parse_formulation(get<std::string>(v, key));
    else if (key == "re") c.params.reynolds = get<double>(v, key);
    else if (key == "cs") c.params.smagorinsky_constant = get<double>(v, key);
    else if (key == "s") c.params.exponent_s = get<double>(v, key);
    else if (key == "eps") c.params.regularization_eps = get<double>(v, key);
    else if (key == "delta" || key == "r") {
      const bool derived = v.is_string();
      const std::string rule = key == "delta" ? "1/m" : "4/3+s";
      if (derived && get<std::string>(v, key) != rule) {
        throw InvalidArgument("config key '" + key + "' must be a number or \"" + rule + "\"");
      }
      (key == "delta" ? c.delta_from_m : c.r_from_s) = derived;
      if (!derived) (key == "delta" ? c.params.filter_width : c.params.exponent_r) = get<double>(v, key);
    }
    else if (key == "dt") c.time.dt = get<double>(v, key);
    else if (key == "t_end") c.time.t_end = get<double>(v, key);
    else if (key == "nonlinear_tol") c.time.nonlinear_tol = get<double>(v, key);
    else if (key == "nonlinear_max_iters") c.time.nonlinear_max_iters = get<int>(v, key);
    else if (key == "picard_fallback") c.time.picard_fallback = get<bool>(v, key);
    else if (key == "picard_max_iters") c.time.picard_max_iters = get<int>(v, key);
    else if (key == "linear_tol") c.time.linear_tol = get<double>(v, key);
    else if (key == "threads") c.time.threads = get<int>(v, key);
    else if (key == "reuse_jacobian") c.time.reuse_jacobian = get<bool>(v, key);
    else if (key == "m") c.m = get<int>(v, key);
    else if (key == "m_list") c.m_list = get<std::vector<int>>(v, key);
    else if (key == "h_target") c.h_target = get<double>(v, key);
    else if (key == "omega") c.omega = get<double>(v, key);
    else if (key == "out") c.out = get<std::string>(v, key);
    else if (key == "csv") c.csv = get<bool>(v, key);
    else if (key == "vtk") c.vtk = get<bool>(v, key);
    else if (key == "vtk_interval") c.vtk_interval = get<double>(v, key);
    else if (key == "outflow") {
      const auto o = get<std::string>(v, key);
      if (o != "do-nothing" && o != "no-penetration") {
        throw InvalidArgument("outflow must be \"do-nothing\" or \"no-penetration\"");
      }
      c.no_penetration_outflow = o == "no-penetration";
    }
    else throw InvalidArgument("unknown config key '" + key + "'");
  }
}

json to_json(const RunConfig& c) {
  json j;
  j["benchmark"] = to_string(c.benchmark);
  j["formulation"] = std::string(lmles::to_string(c.params.formulation));
  j["re"] = c.params.reynolds;
  j["cs"] = c.params.smagorinsky_constant;
  j["s"] = c.params.exponent_s;
  j["eps"] = c.params.regularization_eps;
  j["delta"] = c.delta_from_m ? json("1/m") : json(c.params.filter_width);
  j["r"] = c.r_from_s ? json("4/3+s") : json(c.params.exponent_r);
  j["dt"] = c.time.dt;
  j["t_end"] = c.time.t_end;
  j["nonlinear_tol"] = c.time.nonlinear_tol;
  j["nonlinear_max_iters"] = c.time.nonlinear_max_iters;
  j["picard_fallback"] = c.time.picard_fallback;
  j["picard_max_iters"] = c.time.picard_max_iters;
  j["linear_tol"] = c.time.linear_tol;
  j["threads"] = c.time.threads;
  j["reuse_jacobian"] = c.time.reuse_jacobian;
  j["m"] = c.m;
  j["m_list"] = c.m_list;
  j["h_target"] = c.h_target;
  j["omega"] = c.omega;
  j["out"] = c.out.string();
  j["csv"] = c.csv;
  j["vtk"] = c.vtk;
  j["vtk_interval"] = c.vtk_interval;
  j["outflow"] = c.no_penetration_outflow ? "no-penetration" : "do-nothing";
  return j;
}

json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw lmles::Error("cannot open config file " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw lmles::ParseError(path.string() + ": " + e.what(), 0);
  }
}

}  // namespace lm
