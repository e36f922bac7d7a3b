#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "penkin/harness.hpp"
#include "penkin/penrose.hpp"
#include "penkin/profiles.hpp"
#include "penkin/solver.hpp"

namespace penkin {

struct GridSection {
  std::size_t n_x = 64;
  std::size_t n_v = 256;
  double length = 2.0 * 3.14159265358979323846;
  double v_max = 8.0;

  GridX x() const { return GridX(n_x, length); }
  GridV v() const { return GridV(n_v, v_max); }
};

struct StudySection {
  std::vector<double> epsilons = {0.2, 0.1, 0.05, 0.025};
  std::vector<ErrorNorm> error_norms = all_error_norms();
  double margin_floor = 0.1;
  std::size_t precheck_x_samples = 4;
  double seed_amplitude = 1e-4;
  ProfileSpec stable;    // instability demo, expected quiet
  ProfileSpec unstable;  // instability demo, expected to grow
  StudySection();
};

// Space-time operator experiments.
struct KernelSection {
  std::size_t n_t = 64;
  double T = 1.0;
  double gamma = 5.0;
  double s1 = 1.5;
  double s2 = 1.0;
};

struct Config {
  GridSection grid;
  InitialDataSpec initial;
  SolverConfig solver;
  bool penrose_diagnostics = false;  // attach the scan below to the solver
  ScanConfig penrose;
  double c0 = 0.1;
  StudySection study;
  KernelSection kernel;

  // Solver settings with the scan attached when requested.
  SolverConfig solver_config() const;
  StudyConfig study_config(const std::filesystem::path& out) const;

  nlohmann::json to_json() const;
  // Strict: unknown keys and out-of-range values raise SchemaError naming the
  // JSON path.
  static Config from_json(const nlohmann::json& j);
};

Config parse_config(const std::filesystem::path& path);
std::string serialize(const Config& c);

}  // namespace penkin
