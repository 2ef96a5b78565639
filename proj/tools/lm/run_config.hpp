#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "lmles/forms/model_params.hpp"
#include "lmles/stepper/time_stepper.hpp"

namespace lm {

enum class Benchmark { TaylorGreen, Step, Convergence };

std::string to_string(Benchmark b);
Benchmark parse_benchmark(const std::string& text);

/// Everything one `lm` invocation needs. Defaults reproduce the reference
/// settings of each benchmark.
struct RunConfig {
  Benchmark benchmark = Benchmark::TaylorGreen;
  lmles::ModelParams params;
  lmles::TimeConfig time;

  int m = 16;
  std::vector<int> m_list{16, 32, 48};
  double h_target = 0.32;
  double omega = 1.0;
  // delta = 1/m and r = 4/3 + s unless set explicitly.
  bool delta_from_m = true;
  bool r_from_s = true;

  std::filesystem::path out = "lm_out";
  bool csv = true;
  bool vtk = false;
  double vtk_interval = 1.0;
  bool no_penetration_outflow = false;

  /// Model parameters for mesh parameter m (delta and r resolved).
  lmles::ModelParams params_for(int mesh_m) const;
  void validate() const;
};

RunConfig defaults_for(Benchmark b);

/// Applies a flat key-value object on top of `config`. Unknown keys and
/// values of the wrong type throw lmles::InvalidArgument.
void apply_settings(RunConfig& config, const nlohmann::json& values);

/// All effective parameters; apply_settings(defaults_for(b), to_json(c)) == c.
nlohmann::json to_json(const RunConfig& config);

nlohmann::json load_json(const std::filesystem::path& path);

}  // namespace lm
