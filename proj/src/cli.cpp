#include "penkin/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "penkin/config.hpp"
#include "penkin/core/snapshot.hpp"
#include "penkin/harness.hpp"
#include "penkin/kernelops.hpp"
#include "penkin/parallel.hpp"

namespace penkin {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream o(p);
  if (!o) throw IoError("cannot write " + p.string());
  o << text;
}

void prepare_out(const fs::path& out, const Config& cfg) {
  if (out.empty()) return;
  fs::create_directories(out);
  write_file(out / "config.json", serialize(cfg));
}

// Two-column gnuplot data.
std::string columns(const std::vector<std::pair<double, double>>& xy) {
  std::ostringstream o;
  o.precision(17);
  for (const auto& [x, y] : xy) o << x << ' ' << y << '\n';
  return o.str();
}

std::vector<double> split_numbers(const std::string& s) {
  std::vector<double> out;
  std::stringstream in(s);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::logic_error&) {
      throw InvalidArgument("cannot read '" + tok + "' as a number");
    }
  }
  return out;
}

std::string one_line(std::string s) {
  for (auto& ch : s) {
    if (ch == '\n' || ch == '\r') ch = ' ';
  }
  return s;
}

int penrose_check(const Config& cfg, std::ostream& out) {
  const auto report = penrose_margin(build_profile(cfg.initial.base, cfg.grid.v()), cfg.penrose);
  const bool stable = report.margin >= cfg.c0;
  json j = report.to_json();
  j["c0"] = cfg.c0;
  j["stable"] = stable;
  out << j.dump(2) << '\n';
  return stable ? 0 : 2;
}

int simulate(const Config& cfg, const fs::path& dir, std::ostream& out) {
  prepare_out(dir, cfg);
  const auto f0 = build_initial_data(cfg.initial, cfg.grid.x(), cfg.grid.v());
  std::size_t k = 0;
  std::vector<std::pair<double, double>> energy;
  auto res = run(f0, cfg.solver_config(), [&](const PhaseField& f, const DiagnosticsRecord& r) {
    if (!dir.empty()) write_snapshot(dir / ("f_" + std::to_string(k)), f, r.time);
    energy.emplace_back(r.time, r.total_energy);
    ++k;
  });
  const std::string csv = trace_csv(res.trace);
  if (dir.empty()) {
    out << csv;
  } else {
    write_file(dir / "trace.csv", csv);
    write_file(dir / "energy.dat", columns(energy));
    const auto& last = res.trace.back();
    out << json{{"time", last.time}, {"mass", last.mass}, {"total_energy", last.total_energy},
                {"records", res.trace.size()}}
               .dump()
        << '\n';
  }
  return 0;
}

int study_quasineutral(const Config& cfg, const fs::path& dir, std::ostream& out) {
  prepare_out(dir, cfg);
  const auto table = quasineutral_study(cfg.study_config(dir));
  out << table.csv();
  return 0;
}

int study_instability(const Config& cfg, const fs::path& dir, std::ostream& out) {
  prepare_out(dir, cfg);
  const auto rep = instability_demo(cfg.study.stable, cfg.study.unstable, cfg.study.seed_amplitude, cfg.initial.mode,
                                    cfg.grid.x(), cfg.grid.v(), cfg.solver, cfg.penrose, cfg.c0);
  if (!dir.empty()) {
    write_file(dir / "instability.json", rep.json() + "\n");
    write_file(dir / "amplitude_stable.dat", columns(rep.stable.amplitude));
    write_file(dir / "amplitude_unstable.dat", columns(rep.unstable.amplitude));
  }
  out << rep.json() << '\n';
  return 0;
}

int kernel_norm(const Config& cfg, const fs::path& dir, std::ostream& out) {
  prepare_out(dir, cfg);
  const auto f0 = build_initial_data(cfg.initial, cfg.grid.x(), cfg.grid.v());
  const auto G = KernelFunction::from_distribution(f0);
  const auto est = kernel_norm_estimate(G, cfg.kernel.n_t, cfg.kernel.T);
  json j{{"sigma_max", est.sigma_max},
         {"iterations", est.iterations},
         {"last_change", est.last_change},
         {"norm_G", norm_G(G, cfg.kernel.s1, cfg.kernel.s2, cfg.kernel.T)},
         {"norm_G_bound", norm_G_sobolev_bound(G, cfg.kernel.s1, cfg.kernel.s2, cfg.kernel.T)}};
  if (!dir.empty()) write_file(dir / "kernel_norm.json", j.dump(2) + "\n");
  out << j.dump(2) << '\n';
  return 0;
}

// Test signal: a time bump centred at T/2 of width T/10 times two x-modes.
SpaceTimeField equivalence_signal(const Config& cfg) {
  const auto gx = cfg.grid.x();
  const double T = cfg.kernel.T;
  SpaceTimeField h(cfg.kernel.n_t, T / static_cast<double>(cfg.kernel.n_t), gx);
  const double w = 2.0 * std::numbers::pi / gx.length();
  for (std::size_t i = 0; i < h.n_t(); ++i) {
    const double b = std::exp(-std::pow((h.time(i) - 0.5 * T) / (0.1 * T), 2));
    for (std::size_t j = 0; j < gx.size(); ++j) {
      const double x = gx.node(j);
      h(i, j) = b * (std::cos(w * x) + 0.5 * std::sin(2.0 * w * x));
    }
  }
  return h;
}

int kernel_equiv(const Config& cfg, const fs::path& dir, std::ostream& out) {
  prepare_out(dir, cfg);
  const auto f0 = build_initial_data(cfg.initial, cfg.grid.x(), cfg.grid.v());
  const auto eq = kernel_symbol_equivalence(f0, cfg.kernel.gamma, equivalence_signal(cfg));
  json j{{"discrepancy", eq.discrepancy}, {"n_t", cfg.kernel.n_t}, {"n_x", cfg.grid.n_x}, {"n_v", cfg.grid.n_v}};
  if (!dir.empty()) write_file(dir / "kernel_equiv.json", j.dump(2) + "\n");
  out << j.dump(2) << '\n';
  return 0;
}

int validate_refine(const Config& cfg, int levels, bool refine_v, const fs::path& dir, std::ostream& out) {
  prepare_out(dir, cfg);
  const auto t = refinement_study(cfg.initial, cfg.grid.x(), cfg.grid.v(), cfg.solver, levels, refine_v);
  if (!dir.empty()) write_file(dir / "refine.csv", t.csv());
  out << t.csv();
  return 0;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Penrose-stable kinetic solver and study harness", "penkin"};
  int threads = 0;
  app.add_option("--threads", threads, "worker threads (default: PENROSE_KINETIC_THREADS or all cores)");

  std::string config_path, out_dir, mode, epsilons;
  double c0 = -1.0, epsilon = -1.0;
  int levels = 3;
  bool refine_v = false;

  auto add_config = [&](CLI::App* s) { s->add_option("--config", config_path, "JSON config")->required(); };
  auto add_out = [&](CLI::App* s) { s->add_option("--out", out_dir, "output directory"); };

  auto* pen = app.add_subcommand("penrose", "Penrose stability of the base profile");
  auto* pen_check = pen->add_subcommand("check", "margin and classification; exit 2 when unstable");
  add_config(pen_check);
  pen_check->add_option("--c0", c0, "stability threshold");
  pen->require_subcommand(1);

  auto* sim = app.add_subcommand("simulate", "run the solver and write trace.csv and snapshots");
  add_config(sim);
  add_out(sim);
  sim->add_option("--mode", mode, "vp or vdb")->check(CLI::IsMember({"vp", "vdb"}));
  sim->add_option("--epsilon", epsilon, "Debye length for vp");

  auto* study = app.add_subcommand("study", "convergence and instability studies");
  auto* st_q = study->add_subcommand("quasineutral", "vp(eps) against the vdb limit");
  add_config(st_q);
  add_out(st_q);
  st_q->add_option("--epsilons", epsilons, "comma separated, decreasing");
  auto* st_i = study->add_subcommand("instability", "seeded growth for a stable and an unstable profile");
  add_config(st_i);
  add_out(st_i);
  study->require_subcommand(1);

  auto* ker = app.add_subcommand("kernel", "space-time averaging operator");
  auto* k_norm = ker->add_subcommand("norm", "largest singular value and the symbol norm");
  auto* k_equiv = ker->add_subcommand("equiv", "operator against its quantized symbol");
  for (auto* s : {k_norm, k_equiv}) {
    add_config(s);
    add_out(s);
  }
  ker->require_subcommand(1);

  auto* val = app.add_subcommand("validate", "numerical self-checks");
  auto* v_ref = val->add_subcommand("refine", "dt halving study");
  add_config(v_ref);
  add_out(v_ref);
  v_ref->add_option("--levels", levels, "number of levels (at least 2)");
  v_ref->add_flag("--refine-v", refine_v, "double n_v with each level");
  val->require_subcommand(1);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "penkin: " << one_line(e.what()) << '\n';
    return 1;
  }
  if (app.get_subcommands().empty()) {
    err << app.help();
    return 1;
  }

  try {
    set_threads(resolve_threads(threads));
    Config cfg = parse_config(config_path);
    const fs::path dir = out_dir;
    if (pen_check->parsed()) {
      if (c0 >= 0.0) cfg.c0 = c0;
      if (!(cfg.c0 > 0.0)) throw InvalidArgument("--c0 must be positive");
      return penrose_check(cfg, out);
    }
    if (sim->parsed()) {
      if (mode == "vp") {
        cfg.solver.mode = FieldMode::vp(epsilon >= 0.0 ? epsilon : cfg.solver.mode.epsilon);
      } else if (mode == "vdb") {
        if (epsilon >= 0.0) throw InvalidArgument("--epsilon only applies to --mode vp");
        cfg.solver.mode = FieldMode::vdb();
      } else if (epsilon >= 0.0) {
        throw InvalidArgument("--epsilon needs --mode vp");
      }
      cfg = Config::from_json(cfg.to_json());  // re-validate overrides
      return simulate(cfg, dir, out);
    }
    if (st_q->parsed()) {
      if (!epsilons.empty()) cfg.study.epsilons = split_numbers(epsilons);
      cfg = Config::from_json(cfg.to_json());
      return study_quasineutral(cfg, dir, out);
    }
    if (st_i->parsed()) return study_instability(cfg, dir, out);
    if (k_norm->parsed()) return kernel_norm(cfg, dir, out);
    if (k_equiv->parsed()) return kernel_equiv(cfg, dir, out);
    if (v_ref->parsed()) return validate_refine(cfg, levels, refine_v, dir, out);
  } catch (const UnstableData& e) {
    err << "penkin: " << one_line(e.what()) << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "penkin: " << one_line(e.what()) << '\n';
    return 1;
  }
  err << app.help();
  return 1;
}

int dispatch(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return dispatch(args, std::cout, std::cerr);
}

}  // namespace penkin
