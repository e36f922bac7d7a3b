#include "penkin/solver.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "penkin/core/fft.hpp"
#include "penkin/core/ops.hpp"
#include "penkin/simd/kernels.hpp"

namespace penkin {
namespace {

// Phase table exp(-i k_q v_i dt) for one step length, reused across steps.
class XAdvector {
 public:
  XAdvector(const GridX& gx, const GridV& gv, double dt) : gx_(gx), gv_(gv), fft_(gx.size()), dt_(dt) {
    const std::size_t nm = gx.n_modes();
    phase_.resize(gv.size() * nm);
    for (std::size_t i = 0; i < gv.size(); ++i) {
      const double v = gv.node(i);
      for (std::size_t q = 0; q < nm; ++q) phase_[i * nm + q] = std::polar(1.0, -gx.wavenumber(q) * v * dt);
    }
  }

  PhaseField apply(const PhaseField& f) const {
    if (dt_ == 0.0) return f;
    const std::size_t nx = gx_.size(), nv = gv_.size(), nm = gx_.n_modes();
    PhaseField out(gx_, gv_);
    const auto& k = simd::kernels();
    const double inv = 1.0 / static_cast<double>(nx);
#pragma omp parallel
    {
      std::vector<double> col(nx);
      std::vector<cplx> spec(nm);
#pragma omp for schedule(static)
      for (std::size_t i = 0; i < nv; ++i) {
        for (std::size_t j = 0; j < nx; ++j) col[j] = f(j, i);
        fft_.forward(col.data(), spec.data());
        k.complex_mul(spec.data(), phase_.data() + i * nm, nm);
        fft_.backward(spec.data(), col.data());
        for (std::size_t j = 0; j < nx; ++j) out(j, i) = col[j] * inv;
      }
    }
    return out;
  }

 private:
  GridX gx_;
  GridV gv_;
  RealFft fft_;
  double dt_;
  std::vector<cplx> phase_;
};

class Stepper {
 public:
  Stepper(const GridX& gx, const GridV& gv, const SolverConfig& cfg, double dt)
      : half_(gx, gv, 0.5 * dt), mode_(cfg.mode), dt_(dt) {}

  PhaseField step(const PhaseField& f) const {
    PhaseField g = half_.apply(f);
    const auto fs = solve_field(density(g), mode_);
    g = advect_v(g, fs.E, dt_);
    return half_.apply(g);
  }

 private:
  XAdvector half_;
  FieldMode mode_;
  double dt_;
};

std::set<double> sobolev_indices(const SolverConfig& cfg) { return {0.0, 1.0, cfg.sobolev_s}; }

}  // namespace

void SolverConfig::validate(const GridX& gx, const GridV& gv) const {
  mode.validate();
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("dt must be positive");
  if (!(t_end >= dt)) throw InvalidArgument("t_end must be at least dt");
  if (diagnostics_every < 1) throw InvalidArgument("diagnostics_every must be positive");
  if (!(dt * gv.v_max() <= 0.5 * gx.length())) throw InvalidArgument("dt * v_max exceeds L / 2");
  if (!(sobolev_s >= 0.0)) throw InvalidArgument("sobolev_s must be non-negative");
  if (penrose_scan) {
    penrose_scan->validate();
    if (x_samples < 1 || x_samples > gx.size()) throw InvalidArgument("x_samples must lie in [1, n_x]");
  }
}

std::size_t SolverConfig::steps() const {
  return static_cast<std::size_t>(std::max(1.0, std::ceil(t_end / dt - 1e-9)));
}

PhaseField advect_x(const PhaseField& f, double dt) {
  if (dt == 0.0) return f;
  return XAdvector(f.grid_x(), f.grid_v(), dt).apply(f);
}

PhaseField advect_v(const PhaseField& f, const SpatialField& E, double dt) {
  SpatialField d(E.grid());
  for (std::size_t j = 0; j < d.size(); ++j) d[j] = E[j] * dt;
  return shift_interpolate_v(f, d);
}

PhaseField step(const PhaseField& f, const SolverConfig& cfg) {
  cfg.validate(f.grid_x(), f.grid_v());
  return Stepper(f.grid_x(), f.grid_v(), cfg, cfg.dt).step(f);
}

DiagnosticsRecord diagnose(const PhaseField& f, const SolverConfig& cfg, double time) {
  DiagnosticsRecord r;
  r.time = time;
  const auto& gx = f.grid_x();
  const auto& gv = f.grid_v();
  const auto rho = density(f);
  r.mass = gx.dx() * simd::kernels().sum(rho.values().data(), rho.size());
  double mom = 0.0, kin = 0.0;
  for (std::size_t j = 0; j < f.n_x(); ++j) {
    auto row = f.row(j);
    for (std::size_t i = 0; i < row.size(); ++i) {
      const double v = gv.node(i);
      mom += row[i] * v;
      kin += row[i] * v * v;
    }
  }
  const double cell = gx.dx() * gv.dv();
  r.momentum = mom * cell;
  const auto fs = solve_field(rho, cfg.mode);
  r.total_energy = 0.5 * kin * cell + field_energy(fs, cfg.mode);
  r.l2_f = l2_norm(f);
  r.linf_f = linf_norm(f);
  r.min_f = min_value(f);
  for (double s : sobolev_indices(cfg)) r.rho_sobolev[s] = sobolev_norm_x(rho, s);
  r.n_proxy = r.l2_f;
  if (cfg.penrose_scan) r.penrose_margin = penrose_margin_field(f, *cfg.penrose_scan, cfg.x_samples);
  return r;
}

RunResult run(const PhaseField& f0, const SolverConfig& cfg, const RecordHook& hook) {
  cfg.validate(f0.grid_x(), f0.grid_v());
  for (double x : f0.data()) {
    if (!std::isfinite(x)) throw InvalidArgument("initial data contains a non-finite value");
  }
  const std::size_t n = cfg.steps();
  const double dt = cfg.dt_effective();
  const Stepper st(f0.grid_x(), f0.grid_v(), cfg, dt);

  std::vector<DiagnosticsRecord> trace;
  double sup_l2 = l2_norm(f0);
  const double linf0 = linf_norm(f0);
  double prev_hs2 = std::pow(sobolev_norm_x(density(f0), cfg.sobolev_s), 2);
  double cum = 0.0;

  auto record = [&](const PhaseField& f, double t) {
    auto r = diagnose(f, cfg, t);
    r.n_proxy = sup_l2 + std::sqrt(cum);
    trace.push_back(r);
    if (hook) hook(f, r);
  };

  PhaseField f = f0;
  record(f, 0.0);
  for (std::size_t k = 1; k <= n; ++k) {
    const double t = (k == n) ? cfg.t_end : static_cast<double>(k) * dt;
    try {
      f = st.step(f);
    } catch (const InvalidArgument& e) {
      // only non-finite intermediate fields get here once cfg has validated
      throw NumericalBlowup(std::string(e.what()) + " at t = " + std::to_string(t), trace);
    }
    const double lf = linf_norm(f);
    if (!std::isfinite(lf) || lf > 1e3 * linf0) {
      std::ostringstream msg;
      msg << "max |f| = " << lf << " at t = " << t << " exceeds 1000x the initial " << linf0;
      throw NumericalBlowup(msg.str(), trace);
    }
    const double hs2 = std::pow(sobolev_norm_x(density(f), cfg.sobolev_s), 2);
    cum += 0.5 * dt * (prev_hs2 + hs2);
    prev_hs2 = hs2;
    sup_l2 = std::max(sup_l2, l2_norm(f));
    if (k % static_cast<std::size_t>(cfg.diagnostics_every) == 0 || k == n) record(f, t);
  }
  return {std::move(f), std::move(trace)};
}

bool positivity_ok(const std::vector<DiagnosticsRecord>& trace) {
  for (const auto& r : trace) {
    if (r.min_f < -1e-6 * r.linf_f) return false;
  }
  return true;
}

std::string trace_csv(const std::vector<DiagnosticsRecord>& trace) {
  std::ostringstream out;
  out.precision(17);
  out << "time,mass,momentum,total_energy,l2_f,linf_f,min_f";
  if (!trace.empty()) {
    for (const auto& [s, v] : trace.front().rho_sobolev) out << ",rho_H" << s;
  }
  out << ",n_proxy,penrose_margin\n";
  for (const auto& r : trace) {
    out << r.time << ',' << r.mass << ',' << r.momentum << ',' << r.total_energy << ',' << r.l2_f << ','
        << r.linf_f << ',' << r.min_f;
    for (const auto& [s, v] : r.rho_sobolev) out << ',' << v;
    out << ',' << r.n_proxy << ',';
    if (r.penrose_margin) out << *r.penrose_margin;
    out << '\n';
  }
  return out.str();
}

}  // namespace penkin
