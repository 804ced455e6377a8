#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mcflow/geometry.hpp"
#include "mcflow/problem.hpp"
#include "mcflow/solver.hpp"

namespace mcflow {

struct RadialConfig {
  double R = 1.0;
  int n = 10000;
};

/// One run, read from JSON:
///
///   {
///     "domain":  {"kind": "ellipse", "a": 2.0, "b": 1.0}
///              | {"kind": "fourier", "r0": 1.0, "harmonics": [[k, cos, sin], ...]},
///     "problem": {"kind": "power_mc", "alpha": 3.0}
///              | {"kind": "constant_forcing", "mu": 1.0},
///     "h": 0.05,
///     "betas": [1.0, 1.5, 2.0],
///     "output_dir": "out",
///     "emit_fields": true,
///     "radial": {"R": 1.0, "n": 10000},
///     "solver": {"residual_tol": 1e-10, "max_iters": 50, "continuation_steps": 1}
///   }
///
/// Only "domain" and "problem" are required.
struct RunConfig {
  Domain::Kind domain = Ellipse{1.0, 1.0};
  Problem problem = Problem::power_mc(2.0);
  double h = 0.05;
  std::vector<double> betas{1.0, 1.5, 2.0};
  std::filesystem::path output_dir = "out";
  bool emit_fields = true;
  std::optional<RadialConfig> radial;
  SolveOptions solve;
  bool explore = false;
};

struct ConfigOverrides {
  std::optional<double> h;
  std::optional<double> alpha;
  std::optional<double> mu;
  std::optional<std::filesystem::path> output_dir;
  bool explore = false;
};

/// Throws ConfigError naming the offending field.
RunConfig parse_config(const nlohmann::json& j, const ConfigOverrides& overrides = {});
RunConfig load_config(const std::filesystem::path& path, const ConfigOverrides& overrides = {});

}  // namespace mcflow
