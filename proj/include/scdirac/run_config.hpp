#pragma once

#include "scdirac/dirac_pde.hpp"
#include "scdirac/fields.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace scdirac {

enum class RunMode { classical, spin, bmt, compare, quantum, convergence, identities };

RunMode parse_run_mode(const std::string& name);
std::string to_string(RunMode mode);

/// User-facing field parameters; build() compiles them to potentials.
struct FieldSpec {
  FieldKind kind = FieldKind::none;
  Vec3 b = Vec3::Zero();
  Vec3 e = Vec3::Zero();
  double kappa = 0.0;
  Vec3 center = Vec3::Zero();
  Gauge gauge = Gauge::symmetric;
  std::vector<Monomial> phi;                  // custom_polynomial only
  std::array<std::vector<Monomial>, 3> a;     // custom_polynomial only

  FieldConfig build() const;
};

struct GridSettings {
  GridSpec grid;
  double sigma = 0.3;
  int order = 2;
  int samples = 10;
  bool snapshots = false;
};

struct ConvergenceSettings {
  std::vector<double> eps_list{0.2, 0.1, 0.05};
  double sigma_coeff = 1.0;
  double dt_coeff = 0.2;
  int samples = 4;
};

/// One scenario run, read from a single JSON document.
struct RunConfig {
  std::string scenario = "custom";
  RunMode mode = RunMode::classical;
  ParticleParams particle;
  FieldSpec field;
  Vec3 q0 = Vec3::Zero();
  Vec3 p0 = Vec3::Zero();  // canonical momentum
  Vec3 spin_axis{0, 0, 1};
  std::optional<Spinor4> spinor;  // overrides spin_axis when given
  double dt = 0.01;
  double t_final = 1.0;
  int stride = 1;
  GridSettings grid;
  ConvergenceSettings convergence;
  int identity_points = 50;
  double identity_threshold_scale = 1.0;
  std::uint64_t seed = 42;
  std::string output_dir = "out";
};

/// Parses and validates a configuration. Throws ConfigError naming the offending key.
RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::string& path);

/// The configuration as JSON; parse_run_config(run_config_json(c)) reproduces c.
std::string run_config_json(const RunConfig& config);

struct ScenarioPreset {
  std::string name;
  std::string description;
  RunConfig config;
};

/// free, uniform_B_cyclotron, crossed_EB_drift, harmonic_trap, convergence_2d_B.
std::vector<ScenarioPreset> scenario_presets();

}  // namespace scdirac
