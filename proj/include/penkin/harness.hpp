#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "penkin/profiles.hpp"
#include "penkin/solver.hpp"

namespace penkin {

enum class ErrorNorm { L2_f, Linf_f, L2_rho, Linf_rho };
std::string to_string(ErrorNorm n);
ErrorNorm error_norm_from_string(const std::string& s);
std::vector<ErrorNorm> all_error_norms();

struct StudyConfig {
  InitialDataSpec initial;
  GridX grid_x{64};
  GridV grid_v{256};
  std::vector<double> epsilons;  // non-increasing, in (0, 1]
  SolverConfig solver;           // mode is overridden per row
  std::vector<ErrorNorm> error_norms = all_error_norms();
  ScanConfig precheck_scan;
  std::size_t precheck_x_samples = 4;
  double margin_floor = 0.1;  // refuse data whose initial margin is below this
  std::filesystem::path output_dir;  // empty: keep everything in memory

  void validate() const;
};

struct StudyRow {
  double epsilon = 0.0;  // 0 marks the vdb reference row
  std::map<ErrorNorm, double> errors;
  std::optional<double> min_margin;
  double wall_seconds = 0.0;
  std::string status;  // "reference", "ok" or "failed: ..."
};

struct StudyTable {
  double initial_margin = 0.0;
  std::vector<StudyRow> rows;

  // epsilon, sup_L2_f, sup_Linf_f, sup_L2_rho, sup_Linf_rho, min_penrose_margin,
  // wall_seconds, status. Norms that were not requested are left empty.
  std::string csv() const;
};

StudyTable quasineutral_study(const StudyConfig& cfg);

// Errors between two fields on the same grid.
double error_between(const PhaseField& a, const PhaseField& b, ErrorNorm n);

struct Persistence {
  bool holds = false;
  double min_margin = 0.0;
  std::vector<std::pair<double, double>> margins;  // (time, margin)
};

Persistence penrose_persistence(const std::vector<DiagnosticsRecord>& trace, double c0);

enum class GrowthClass { growth, quiet, indeterminate };
std::string to_string(GrowthClass c);

struct InstabilityRun {
  double margin = 0.0;
  double growth = 1.0;  // |rho_k0|(T) / |rho_k0|(0)
  GrowthClass verdict = GrowthClass::quiet;
  std::vector<std::pair<double, double>> amplitude;  // (time, |rho_k0|)
};

struct InstabilityReport {
  InstabilityRun stable;
  InstabilityRun unstable;
  std::string json() const;
};

// Runs vdb on both data sets seeded with the same perturbation (density
// modulation of mode initial.mode). `solver.mode` is ignored.
InstabilityReport instability_demo(const ProfileSpec& stable, const ProfileSpec& unstable, double seed_amplitude,
                                   int mode, const GridX& gx, const GridV& gv, const SolverConfig& solver,
                                   const ScanConfig& scan, double c0 = 0.1);

struct RefinementRow {
  int level = 0;
  double dt = 0.0;
  std::size_t n_v = 0;
  double difference = 0.0;  // to the previous level; 0 on level 0
  std::optional<double> order;
};

struct RefinementTable {
  std::vector<RefinementRow> rows;
  std::string csv() const;
};

// Halves dt per level (and doubles n_v when refine_v is set, in which case
// differences are taken between densities). Differences are discrete L2 norms
// at t_end.
RefinementTable refinement_study(const InitialDataSpec& initial, const GridX& gx, const GridV& gv,
                                 const SolverConfig& cfg, int levels, bool refine_v = false);

}  // namespace penkin
