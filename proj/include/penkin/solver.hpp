#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "penkin/error.hpp"
#include "penkin/fields.hpp"
#include "penkin/penrose.hpp"

namespace penkin {

struct SolverConfig {
  FieldMode mode;
  double dt = 1.0 / 200.0;
  double t_end = 1.0;
  int diagnostics_every = 10;
  std::optional<ScanConfig> penrose_scan;
  std::size_t x_samples = 4;
  double sobolev_s = 3.0;  // index used by n_proxy

  void validate(const GridX& gx, const GridV& gv) const;
  // Number of steps and the step actually used (t_end / steps).
  std::size_t steps() const;
  double dt_effective() const { return t_end / static_cast<double>(steps()); }
};

struct DiagnosticsRecord {
  double time = 0.0;
  double mass = 0.0;
  double momentum = 0.0;
  double total_energy = 0.0;
  double l2_f = 0.0;
  double linf_f = 0.0;
  double min_f = 0.0;
  std::map<double, double> rho_sobolev;  // s -> ||rho||_{H^s}
  double n_proxy = 0.0;
  std::optional<double> penrose_margin;
};

class NumericalBlowup : public Error {
 public:
  NumericalBlowup(const std::string& msg, std::vector<DiagnosticsRecord> partial)
      : Error("NumericalBlowup: " + msg), trace(std::move(partial)) {}
  std::vector<DiagnosticsRecord> trace;
};

// Free streaming: each v-column's x-modes times exp(-i k v dt).
PhaseField advect_x(const PhaseField& f, double dt);
// Force step: f(x, v - E(x) dt) by cubic splines.
PhaseField advect_v(const PhaseField& f, const SpatialField& E, double dt);
// Strang step: half x, field solve, full v, half x.
PhaseField step(const PhaseField& f, const SolverConfig& cfg);

struct RunResult {
  PhaseField final;
  std::vector<DiagnosticsRecord> trace;
};

using RecordHook = std::function<void(const PhaseField&, const DiagnosticsRecord&)>;

RunResult run(const PhaseField& f0, const SolverConfig& cfg, const RecordHook& hook = {});

DiagnosticsRecord diagnose(const PhaseField& f, const SolverConfig& cfg, double time);

// min_f >= -1e-6 max_f on every record.
bool positivity_ok(const std::vector<DiagnosticsRecord>& trace);

std::string trace_csv(const std::vector<DiagnosticsRecord>& trace);

}  // namespace penkin
