#include "penkin/harness.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "penkin/core/fft.hpp"
#include "penkin/core/ops.hpp"
#include "penkin/core/snapshot.hpp"

namespace penkin {
namespace {

namespace fs = std::filesystem;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double x) {
  std::ostringstream o;
  o.precision(17);
  o << x;
  return o.str();
}

std::string row_dir(double eps) {
  if (eps == 0.0) return "vdb";
  std::ostringstream o;
  o << "eps_" << eps;
  return o.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
}

double mode_amplitude(const PhaseField& f, int mode) {
  const auto c = fourier_coefficients(density(f).values());
  return std::abs(c[static_cast<std::size_t>(mode)]);
}

}  // namespace

std::string to_string(ErrorNorm n) {
  switch (n) {
    case ErrorNorm::L2_f: return "L2_f";
    case ErrorNorm::Linf_f: return "Linf_f";
    case ErrorNorm::L2_rho: return "L2_rho";
    case ErrorNorm::Linf_rho: return "Linf_rho";
  }
  return "?";
}

ErrorNorm error_norm_from_string(const std::string& s) {
  for (auto n : all_error_norms()) {
    if (to_string(n) == s) return n;
  }
  throw InvalidArgument("unknown error norm '" + s + "'");
}

std::vector<ErrorNorm> all_error_norms() {
  return {ErrorNorm::L2_f, ErrorNorm::Linf_f, ErrorNorm::L2_rho, ErrorNorm::Linf_rho};
}

void StudyConfig::validate() const {
  initial.validate();
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    if (!(epsilons[i] > 0.0 && epsilons[i] <= 1.0)) throw InvalidArgument("epsilons must lie in (0, 1]");
    // Repeats are allowed; they must reproduce the earlier row exactly.
    if (i > 0 && !(epsilons[i] <= epsilons[i - 1])) throw InvalidArgument("epsilons must be decreasing");
  }
  solver.validate(grid_x, grid_v);
  precheck_scan.validate();
  if (precheck_x_samples < 1 || precheck_x_samples > grid_x.size()) {
    throw InvalidArgument("precheck x_samples must lie in [1, n_x]");
  }
}

double error_between(const PhaseField& a, const PhaseField& b, ErrorNorm n) {
  if (!a.same_grid(b)) throw GridMismatch("error between fields on different grids");
  switch (n) {
    case ErrorNorm::L2_f:
    case ErrorNorm::Linf_f: {
      double acc = 0.0;
      for (std::size_t k = 0; k < a.data().size(); ++k) {
        const double d = a.data()[k] - b.data()[k];
        acc = n == ErrorNorm::L2_f ? acc + d * d : std::max(acc, std::abs(d));
      }
      return n == ErrorNorm::L2_f ? std::sqrt(acc * a.grid_x().dx() * a.grid_v().dv()) : acc;
    }
    case ErrorNorm::L2_rho:
    case ErrorNorm::Linf_rho: {
      const auto ra = density(a), rb = density(b);
      double acc = 0.0;
      for (std::size_t j = 0; j < ra.size(); ++j) {
        const double d = ra[j] - rb[j];
        acc = n == ErrorNorm::L2_rho ? acc + d * d : std::max(acc, std::abs(d));
      }
      return n == ErrorNorm::L2_rho ? std::sqrt(acc * a.grid_x().dx()) : acc;
    }
  }
  return 0.0;
}

std::string StudyTable::csv() const {
  std::ostringstream o;
  o << "epsilon,sup_L2_f,sup_Linf_f,sup_L2_rho,sup_Linf_rho,min_penrose_margin,wall_seconds,status\n";
  for (const auto& r : rows) {
    o << fmt(r.epsilon);
    for (auto n : all_error_norms()) {
      o << ',';
      if (auto it = r.errors.find(n); it != r.errors.end()) o << fmt(it->second);
    }
    o << ',';
    if (r.min_margin) o << fmt(*r.min_margin);
    o << ',' << fmt(r.wall_seconds) << ',' << r.status << '\n';
  }
  return o.str();
}

StudyTable quasineutral_study(const StudyConfig& cfg) {
  cfg.validate();
  const PhaseField f0 = build_initial_data(cfg.initial, cfg.grid_x, cfg.grid_v);
  StudyTable table;
  table.initial_margin = penrose_margin_field(f0, cfg.precheck_scan, cfg.precheck_x_samples);
  if (table.initial_margin < cfg.margin_floor) {
    throw UnstableData("initial Penrose margin " + fmt(table.initial_margin) + " is below the floor " +
                       fmt(cfg.margin_floor));
  }
  const bool to_disk = !cfg.output_dir.empty();
  if (to_disk) fs::create_directories(cfg.output_dir);

  auto min_margin = [](const std::vector<DiagnosticsRecord>& trace) -> std::optional<double> {
    std::optional<double> m;
    for (const auto& r : trace) {
      if (r.penrose_margin) m = m ? std::min(*m, *r.penrose_margin) : *r.penrose_margin;
    }
    return m;
  };

  // Reference limit run; its record snapshots are what every row is compared to.
  std::vector<PhaseField> reference;
  {
    SolverConfig sc = cfg.solver;
    sc.mode = FieldMode::vdb();
    const fs::path dir = to_disk ? cfg.output_dir / row_dir(0.0) : fs::path();
    if (to_disk) fs::create_directories(dir);
    const auto t0 = std::chrono::steady_clock::now();
    auto res = run(f0, sc, [&](const PhaseField& f, const DiagnosticsRecord& r) {
      if (to_disk) write_snapshot(dir / ("f_" + std::to_string(reference.size())), f, r.time);
      reference.push_back(f);
    });
    StudyRow row;
    row.epsilon = 0.0;
    for (auto n : cfg.error_norms) row.errors[n] = 0.0;
    row.min_margin = min_margin(res.trace);
    row.wall_seconds = seconds_since(t0);
    row.status = "reference";
    if (to_disk) write_text(dir / "trace.csv", trace_csv(res.trace));
    table.rows.push_back(row);
  }

  for (double eps : cfg.epsilons) {
    SolverConfig sc = cfg.solver;
    sc.mode = FieldMode::vp(eps);
    const fs::path dir = to_disk ? cfg.output_dir / row_dir(eps) : fs::path();
    if (to_disk) fs::create_directories(dir);
    StudyRow row;
    row.epsilon = eps;
    for (auto n : cfg.error_norms) row.errors[n] = 0.0;
    std::size_t k = 0;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      auto res = run(f0, sc, [&](const PhaseField& f, const DiagnosticsRecord& r) {
        if (to_disk) write_snapshot(dir / ("f_" + std::to_string(k)), f, r.time);
        for (auto n : cfg.error_norms) row.errors[n] = std::max(row.errors[n], error_between(f, reference.at(k), n));
        ++k;
      });
      row.min_margin = min_margin(res.trace);
      row.status = "ok";
      if (to_disk) write_text(dir / "trace.csv", trace_csv(res.trace));
    } catch (const NumericalBlowup& e) {
      for (auto& [n, v] : row.errors) v = std::numeric_limits<double>::quiet_NaN();
      row.status = std::string("failed: ") + e.what();
      std::replace(row.status.begin(), row.status.end(), ',', ';');
    }
    row.wall_seconds = seconds_since(t0);
    table.rows.push_back(row);
  }
  if (to_disk) write_text(cfg.output_dir / "study.csv", table.csv());
  return table;
}

Persistence penrose_persistence(const std::vector<DiagnosticsRecord>& trace, double c0) {
  if (trace.empty()) throw MissingDiagnostics("empty trace");
  Persistence p;
  p.min_margin = std::numeric_limits<double>::infinity();
  for (const auto& r : trace) {
    if (!r.penrose_margin) throw MissingDiagnostics("record at t = " + fmt(r.time) + " has no Penrose margin");
    p.margins.emplace_back(r.time, *r.penrose_margin);
    p.min_margin = std::min(p.min_margin, *r.penrose_margin);
  }
  p.holds = p.min_margin >= 0.5 * c0;
  return p;
}

std::string to_string(GrowthClass c) {
  switch (c) {
    case GrowthClass::growth: return "GROWTH";
    case GrowthClass::quiet: return "QUIET";
    case GrowthClass::indeterminate: return "INDETERMINATE";
  }
  return "?";
}

std::string InstabilityReport::json() const {
  auto one = [](const InstabilityRun& r) {
    nlohmann::json amp = nlohmann::json::array();
    for (const auto& [t, a] : r.amplitude) amp.push_back({t, a});
    return nlohmann::json{{"margin", r.margin}, {"growth", r.growth}, {"verdict", to_string(r.verdict)}, {"amplitude", amp}};
  };
  return nlohmann::json{{"stable", one(stable)}, {"unstable", one(unstable)}}.dump(2);
}

InstabilityReport instability_demo(const ProfileSpec& stable, const ProfileSpec& unstable, double seed_amplitude,
                                   int mode, const GridX& gx, const GridV& gv, const SolverConfig& solver,
                                   const ScanConfig& scan, double c0) {
  if (mode < 1 || static_cast<std::size_t>(mode) >= gx.size() / 2) {
    throw InvalidArgument("seed mode must lie below the Nyquist index");
  }
  SolverConfig sc = solver;
  sc.mode = FieldMode::vdb();
  sc.penrose_scan.reset();
  sc.validate(gx, gv);

  auto one = [&](const ProfileSpec& base, double margin) {
    InstabilityRun out;
    out.margin = margin;
    InitialDataSpec spec;
    spec.base = base;
    spec.amplitude = seed_amplitude;
    spec.mode = mode;
    const auto f0 = build_initial_data(spec, gx, gv);
    const double a0 = mode_amplitude(f0, mode);
    auto hook = [&](const PhaseField& f, const DiagnosticsRecord& r) {
      out.amplitude.emplace_back(r.time, mode_amplitude(f, mode));
    };
    bool blew_up = false;
    try {
      run(f0, sc, hook);
    } catch (const NumericalBlowup&) {
      blew_up = true;
    }
    // Nothing to amplify without a seed.
    out.growth = (seed_amplitude == 0.0 || a0 == 0.0) ? 1.0 : out.amplitude.back().second / a0;
    if (blew_up || out.growth >= 10.0) {
      out.verdict = GrowthClass::growth;
    } else if (out.growth <= 3.0) {
      out.verdict = GrowthClass::quiet;
    } else {
      out.verdict = GrowthClass::indeterminate;
    }
    return out;
  };

  const double ms = penrose_margin(build_profile(stable, gv), scan).margin;
  const double mu = penrose_margin(build_profile(unstable, gv), scan).margin;
  if (!(ms >= c0)) throw InvalidArgument("the stable profile has margin " + fmt(ms) + " below c0");
  if (mu >= c0) throw InvalidArgument("the unstable profile has margin " + fmt(mu) + " at or above c0");
  return {one(stable, ms), one(unstable, mu)};
}

std::string RefinementTable::csv() const {
  std::ostringstream o;
  o << "level,dt,n_v,difference,order\n";
  for (const auto& r : rows) {
    o << r.level << ',' << fmt(r.dt) << ',' << r.n_v << ',' << fmt(r.difference) << ',';
    if (r.order) o << fmt(*r.order);
    o << '\n';
  }
  return o.str();
}

RefinementTable refinement_study(const InitialDataSpec& initial, const GridX& gx, const GridV& gv,
                                 const SolverConfig& cfg, int levels, bool refine_v) {
  if (levels < 2) throw InvalidLevels("refinement needs at least 2 levels, got " + std::to_string(levels));
  RefinementTable t;
  std::optional<PhaseField> prev;
  std::optional<SpatialField> prev_rho;
  for (int l = 0; l < levels; ++l) {
    SolverConfig sc = cfg;
    sc.dt = cfg.dt / std::ldexp(1.0, l);
    sc.diagnostics_every = std::numeric_limits<int>::max();
    sc.penrose_scan.reset();
    const GridV g(refine_v ? gv.size() << l : gv.size(), gv.v_max());
    const auto res = run(build_initial_data(initial, gx, g), sc);
    RefinementRow row;
    row.level = l;
    row.dt = sc.dt;
    row.n_v = g.size();
    const auto rho = density(res.final);
    if (l > 0) {
      if (refine_v) {
        double acc = 0.0;
        for (std::size_t j = 0; j < rho.size(); ++j) acc += std::pow(rho[j] - (*prev_rho)[j], 2);
        row.difference = std::sqrt(acc * gx.dx());
      } else {
        row.difference = error_between(res.final, *prev, ErrorNorm::L2_f);
      }
      if (l > 1 && row.difference > 0.0 && t.rows.back().difference > 0.0) {
        row.order = std::log2(t.rows.back().difference / row.difference);
      }
    }
    t.rows.push_back(row);
    prev = res.final;
    prev_rho = rho;
  }
  return t;
}

}  // namespace penkin
