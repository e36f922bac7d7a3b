#include "penkin/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace penkin {
namespace {

using nlohmann::json;

// Reads one JSON object, remembering which keys were consumed so leftovers
// can be reported as unknown.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw SchemaError(where() + ": expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  double number(const std::string& key, double def) {
    if (!take(key)) return def;
    const auto& v = j_.at(key);
    if (!v.is_number()) throw SchemaError(where(key) + ": expected a number");
    return v.get<double>();
  }

  long long integer(const std::string& key, long long def) {
    if (!take(key)) return def;
    const auto& v = j_.at(key);
    if (!v.is_number_integer()) throw SchemaError(where(key) + ": expected an integer");
    return v.get<long long>();
  }

  std::size_t positive(const std::string& key, std::size_t def) {
    const long long v = integer(key, static_cast<long long>(def));
    if (v < 1) throw SchemaError(where(key) + ": must be a positive integer, got " + std::to_string(v));
    return static_cast<std::size_t>(v);
  }

  bool boolean(const std::string& key, bool def) {
    if (!take(key)) return def;
    const auto& v = j_.at(key);
    if (!v.is_boolean()) throw SchemaError(where(key) + ": expected true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& key, const std::string& def) {
    if (!take(key)) return def;
    const auto& v = j_.at(key);
    if (!v.is_string()) throw SchemaError(where(key) + ": expected a string");
    return v.get<std::string>();
  }

  std::vector<double> numbers(const std::string& key, std::vector<double> def) {
    if (!take(key)) return def;
    const auto& v = j_.at(key);
    if (!v.is_array()) throw SchemaError(where(key) + ": expected an array of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number()) throw SchemaError(where(key) + ": expected an array of numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  std::vector<std::string> strings(const std::string& key, std::vector<std::string> def) {
    if (!take(key)) return def;
    const auto& v = j_.at(key);
    if (!v.is_array()) throw SchemaError(where(key) + ": expected an array of strings");
    std::vector<std::string> out;
    for (const auto& e : v) {
      if (!e.is_string()) throw SchemaError(where(key) + ": expected an array of strings");
      out.push_back(e.get<std::string>());
    }
    return out;
  }

  Section child(const std::string& key) {
    take(key);
    return Section(j_.at(key), where(key));
  }

  // Parses with the given conversion, reporting its failures at this key.
  template <class F>
  auto convert(const std::string& key, F&& f) -> decltype(f()) {
    try {
      return f();
    } catch (const InvalidArgument& e) {
      throw SchemaError(where(key) + ": " + strip(e.what()));
    }
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) throw SchemaError("unknown key " + where(it.key()));
    }
  }

  std::string where(const std::string& key = {}) const { return key.empty() ? path_ : path_ + "/" + key; }

  static std::string strip(const std::string& msg) {
    const auto p = msg.find(": ");
    return p == std::string::npos ? msg : msg.substr(p + 2);
  }

 private:
  bool take(const std::string& key) {
    if (!j_.contains(key)) return false;
    seen_.insert(key);
    return true;
  }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

// Runs a validate() call and turns its complaint into a SchemaError at path.
template <class F>
void check(const std::string& path, F&& f) {
  try {
    f();
  } catch (const InvalidArgument& e) {
    throw SchemaError(path + ": " + Section::strip(e.what()));
  }
}

json profile_json(const ProfileSpec& p) {
  json j{{"kind", to_string(p.kind)},       {"density", p.density},
         {"mean", p.mean},                  {"temperature", p.temperature},
         {"separation", p.separation},      {"beam_width", p.beam_width},
         {"beam_fraction", p.beam_fraction}};
  if (!p.table.empty()) j["table"] = p.table;
  return j;
}

ProfileSpec read_profile(Section s, const ProfileSpec& def) {
  ProfileSpec p = def;
  p.kind = s.convert("kind", [&] { return profile_kind_from_string(s.string("kind", to_string(def.kind))); });
  p.density = s.number("density", def.density);
  p.mean = s.number("mean", def.mean);
  p.temperature = s.number("temperature", def.temperature);
  p.separation = s.number("separation", def.separation);
  p.beam_width = s.number("beam_width", def.beam_width);
  p.beam_fraction = s.number("beam_fraction", def.beam_fraction);
  p.table = s.numbers("table", def.table);
  s.finish();
  check(s.where(), [&] { p.validate(); });
  return p;
}

}  // namespace

StudySection::StudySection() {
  stable.kind = ProfileKind::maxwellian;
  unstable.kind = ProfileKind::two_stream;
  unstable.separation = 0.2;
  unstable.beam_width = 0.03;
}

SolverConfig Config::solver_config() const {
  SolverConfig s = solver;
  if (penrose_diagnostics) {
    s.penrose_scan = penrose;
  } else {
    s.penrose_scan.reset();
  }
  return s;
}

StudyConfig Config::study_config(const std::filesystem::path& out) const {
  StudyConfig s;
  s.initial = initial;
  s.grid_x = grid.x();
  s.grid_v = grid.v();
  s.epsilons = study.epsilons;
  s.solver = solver_config();
  s.error_norms = study.error_norms;
  s.precheck_scan = penrose;
  s.precheck_x_samples = study.precheck_x_samples;
  s.margin_floor = study.margin_floor;
  s.output_dir = out;
  return s;
}

json Config::to_json() const {
  json norms = json::array();
  for (auto n : study.error_norms) norms.push_back(to_string(n));
  return json{
      {"grid", {{"n_x", grid.n_x}, {"n_v", grid.n_v}, {"length", grid.length}, {"v_max", grid.v_max}}},
      {"initial",
       {{"profile", profile_json(initial.base)},
        {"amplitude", initial.amplitude},
        {"mode", initial.mode},
        {"modulation", to_string(initial.modulation)}}},
      {"solver",
       {{"mode", solver.mode.kind == FieldMode::Kind::vp ? "vp" : "vdb"},
        {"epsilon", solver.mode.epsilon},
        {"dt", solver.dt},
        {"t_end", solver.t_end},
        {"diagnostics_every", solver.diagnostics_every},
        {"penrose_diagnostics", penrose_diagnostics},
        {"x_samples", solver.x_samples},
        {"sobolev_s", solver.sobolev_s}}},
      {"penrose",
       {{"n_sphere", penrose.n_sphere},
        {"sigma_max", penrose.sigma_max},
        {"sigma_values", penrose.sigma_values},
        {"tail_tol", penrose.s_quad.tail_tol},
        {"conv_tol", penrose.s_quad.conv_tol},
        {"n_s", penrose.s_quad.n_s},
        {"max_n_s", penrose.s_quad.max_n_s},
        {"c0", c0},
        {"c0_values", penrose.c0_values}}},
      {"study",
       {{"epsilons", study.epsilons},
        {"error_norms", norms},
        {"margin_floor", study.margin_floor},
        {"precheck_x_samples", study.precheck_x_samples},
        {"seed_amplitude", study.seed_amplitude},
        {"stable", profile_json(study.stable)},
        {"unstable", profile_json(study.unstable)}}},
      {"kernel",
       {{"n_t", kernel.n_t}, {"T", kernel.T}, {"gamma", kernel.gamma}, {"s1", kernel.s1}, {"s2", kernel.s2}}},
  };
}

Config Config::from_json(const json& j) {
  Config c;
  Section root(j, "");
  for (const char* required : {"grid", "initial"}) {
    if (!root.has(required)) throw SchemaError(std::string("missing section /") + required);
  }

  {
    auto s = root.child("grid");
    c.grid.n_x = s.positive("n_x", c.grid.n_x);
    c.grid.n_v = s.positive("n_v", c.grid.n_v);
    c.grid.length = s.number("length", c.grid.length);
    c.grid.v_max = s.number("v_max", c.grid.v_max);
    s.finish();
    check("/grid", [&] {
      c.grid.x();
      c.grid.v();
    });
  }
  {
    auto s = root.child("initial");
    if (!s.has("profile")) throw SchemaError("missing section /initial/profile");
    c.initial.base = read_profile(s.child("profile"), c.initial.base);
    c.initial.amplitude = s.number("amplitude", c.initial.amplitude);
    c.initial.mode = static_cast<int>(s.integer("mode", c.initial.mode));
    c.initial.modulation =
        s.convert("modulation", [&] { return modulation_from_string(s.string("modulation", "density")); });
    s.finish();
    check("/initial", [&] { c.initial.validate(); });
  }
  if (root.has("solver")) {
    auto s = root.child("solver");
    const std::string mode = s.string("mode", "vdb");
    const double eps = s.number("epsilon", 0.0);
    if (mode == "vp") {
      c.solver.mode = s.convert("epsilon", [&] { return FieldMode::vp(eps); });
    } else if (mode == "vdb") {
      if (eps != 0.0) throw SchemaError("/solver/epsilon: must be 0 for mode vdb");
      c.solver.mode = FieldMode::vdb();
    } else {
      throw SchemaError("/solver/mode: expected \"vp\" or \"vdb\", got \"" + mode + "\"");
    }
    c.solver.dt = s.number("dt", c.solver.dt);
    c.solver.t_end = s.number("t_end", c.solver.t_end);
    c.solver.diagnostics_every = static_cast<int>(s.positive("diagnostics_every", c.solver.diagnostics_every));
    c.penrose_diagnostics = s.boolean("penrose_diagnostics", c.penrose_diagnostics);
    c.solver.x_samples = s.positive("x_samples", c.solver.x_samples);
    c.solver.sobolev_s = s.number("sobolev_s", c.solver.sobolev_s);
    s.finish();
  }
  if (root.has("penrose")) {
    auto s = root.child("penrose");
    c.penrose.n_sphere = static_cast<int>(s.positive("n_sphere", c.penrose.n_sphere));
    c.penrose.sigma_max = s.number("sigma_max", c.penrose.sigma_max);
    c.penrose.sigma_values = s.numbers("sigma_values", c.penrose.sigma_values);
    c.penrose.s_quad.tail_tol = s.number("tail_tol", c.penrose.s_quad.tail_tol);
    c.penrose.s_quad.conv_tol = s.number("conv_tol", c.penrose.s_quad.conv_tol);
    c.penrose.s_quad.n_s = s.positive("n_s", c.penrose.s_quad.n_s);
    c.penrose.s_quad.max_n_s = s.positive("max_n_s", c.penrose.s_quad.max_n_s);
    c.c0 = s.number("c0", c.c0);
    c.penrose.c0_values = s.numbers("c0_values", c.penrose.c0_values);
    s.finish();
  }
  check("/penrose", [&] { c.penrose.validate(); });
  if (!(c.c0 > 0.0)) throw SchemaError("/penrose/c0: must be positive");
  check("/solver", [&] { c.solver_config().validate(c.grid.x(), c.grid.v()); });

  if (root.has("study")) {
    auto s = root.child("study");
    c.study.epsilons = s.numbers("epsilons", c.study.epsilons);
    if (s.has("error_norms")) {
      c.study.error_norms.clear();
      for (const auto& n : s.strings("error_norms", {})) {
        c.study.error_norms.push_back(s.convert("error_norms", [&] { return error_norm_from_string(n); }));
      }
    }
    c.study.margin_floor = s.number("margin_floor", c.study.margin_floor);
    c.study.precheck_x_samples = s.positive("precheck_x_samples", c.study.precheck_x_samples);
    c.study.seed_amplitude = s.number("seed_amplitude", c.study.seed_amplitude);
    if (s.has("stable")) c.study.stable = read_profile(s.child("stable"), c.study.stable);
    if (s.has("unstable")) c.study.unstable = read_profile(s.child("unstable"), c.study.unstable);
    s.finish();
  }
  check("/study", [&] { c.study_config({}).validate(); });

  if (root.has("kernel")) {
    auto s = root.child("kernel");
    c.kernel.n_t = s.positive("n_t", c.kernel.n_t);
    c.kernel.T = s.number("T", c.kernel.T);
    c.kernel.gamma = s.number("gamma", c.kernel.gamma);
    c.kernel.s1 = s.number("s1", c.kernel.s1);
    c.kernel.s2 = s.number("s2", c.kernel.s2);
    s.finish();
    if (!(c.kernel.T > 0.0)) throw SchemaError("/kernel/T: must be positive");
    if (!(c.kernel.gamma > 0.0)) throw SchemaError("/kernel/gamma: must be positive");
    if (!(c.kernel.s1 >= 0.0 && c.kernel.s2 >= 0.0)) throw SchemaError("/kernel: s1 and s2 must be non-negative");
  }
  root.finish();
  return c;
}

Config parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError(path.string() + " is not valid JSON: " + e.what());
  }
  return Config::from_json(j);
}

std::string serialize(const Config& c) { return c.to_json().dump(2) + "\n"; }

}  // namespace penkin
