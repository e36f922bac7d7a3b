#include "penkin/profiles.hpp"

#include <cmath>
#include <numbers>

#include "penkin/core/ops.hpp"
#include "penkin/error.hpp"

namespace penkin {
namespace {

double gaussian(double v, double mean, double temperature) {
  const double d = v - mean;
  return std::exp(-d * d / (2.0 * temperature)) / std::sqrt(2.0 * std::numbers::pi * temperature);
}

void require_positive(double x, const char* name) {
  if (!(x > 0.0) || !std::isfinite(x)) throw InvalidArgument(std::string(name) + " must be positive");
}

}  // namespace

void ProfileSpec::validate() const {
  require_positive(density, "density");
  if (!std::isfinite(mean)) throw InvalidArgument("mean must be finite");
  switch (kind) {
    case ProfileKind::maxwellian:
      require_positive(temperature, "temperature");
      break;
    case ProfileKind::two_stream:
      require_positive(beam_width, "beam_width");
      if (!(separation >= 0.0)) throw InvalidArgument("separation must be non-negative");
      break;
    case ProfileKind::bump_on_tail:
      require_positive(temperature, "temperature");
      require_positive(beam_width, "beam_width");
      if (!(beam_fraction >= 0.0 && beam_fraction <= 1.0)) throw InvalidArgument("beam_fraction must lie in [0, 1]");
      break;
    case ProfileKind::custom_table:
      if (table.empty()) throw InvalidArgument("custom_table needs a table");
      for (double x : table) {
        if (!std::isfinite(x)) throw InvalidArgument("custom_table contains a non-finite value");
      }
      break;
  }
}

void InitialDataSpec::validate() const {
  base.validate();
  if (!std::isfinite(amplitude)) throw InvalidArgument("perturbation amplitude must be finite");
  if (mode < 1) throw InvalidArgument("perturbation mode must be a positive integer");
  if (base.kind == ProfileKind::custom_table && modulation != Modulation::density && amplitude != 0.0) {
    throw InvalidArgument("custom_table profiles only support density modulation");
  }
}

std::string to_string(ProfileKind k) {
  switch (k) {
    case ProfileKind::maxwellian: return "maxwellian";
    case ProfileKind::two_stream: return "two_stream";
    case ProfileKind::bump_on_tail: return "bump_on_tail";
    case ProfileKind::custom_table: return "custom_table";
  }
  return "?";
}

ProfileKind profile_kind_from_string(const std::string& s) {
  if (s == "maxwellian") return ProfileKind::maxwellian;
  if (s == "two_stream") return ProfileKind::two_stream;
  if (s == "bump_on_tail") return ProfileKind::bump_on_tail;
  if (s == "custom_table") return ProfileKind::custom_table;
  throw InvalidArgument("unknown profile kind '" + s + "'");
}

std::string to_string(Modulation m) {
  switch (m) {
    case Modulation::density: return "density";
    case Modulation::temperature: return "temperature";
    case Modulation::velocity: return "velocity";
  }
  return "?";
}

Modulation modulation_from_string(const std::string& s) {
  if (s == "density") return Modulation::density;
  if (s == "temperature") return Modulation::temperature;
  if (s == "velocity") return Modulation::velocity;
  throw InvalidArgument("unknown spatial modulation '" + s + "'");
}

VelocityProfile build_maxwellian(const ProfileSpec& spec, const GridV& grid) {
  require_positive(spec.density, "density");
  require_positive(spec.temperature, "temperature");
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = spec.density * gaussian(grid.node(i), spec.mean, spec.temperature);
  return VelocityProfile(grid, std::move(v));
}

VelocityProfile build_two_stream(const ProfileSpec& spec, const GridV& grid) {
  require_positive(spec.density, "density");
  require_positive(spec.beam_width, "beam_width");
  if (!(spec.separation >= 0.0)) throw InvalidArgument("separation must be non-negative");
  const double t = spec.beam_width * spec.beam_width;
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double x = grid.node(i);
    v[i] = 0.5 * spec.density * (gaussian(x, spec.mean - spec.separation, t) + gaussian(x, spec.mean + spec.separation, t));
  }
  return VelocityProfile(grid, std::move(v));
}

VelocityProfile build_bump_on_tail(const ProfileSpec& spec, const GridV& grid) {
  ProfileSpec checked = spec;
  checked.kind = ProfileKind::bump_on_tail;
  checked.validate();
  const double tb = spec.beam_width * spec.beam_width;
  const double beta = spec.beam_fraction;
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double x = grid.node(i);
    v[i] = spec.density * ((1.0 - beta) * gaussian(x, spec.mean, spec.temperature) +
                           beta * gaussian(x, spec.mean + spec.separation, tb));
  }
  return VelocityProfile(grid, std::move(v));
}

VelocityProfile build_profile(const ProfileSpec& spec, const GridV& grid) {
  spec.validate();
  switch (spec.kind) {
    case ProfileKind::maxwellian: return build_maxwellian(spec, grid);
    case ProfileKind::two_stream: return build_two_stream(spec, grid);
    case ProfileKind::bump_on_tail: return build_bump_on_tail(spec, grid);
    case ProfileKind::custom_table: {
      if (spec.table.size() != grid.size()) {
        throw GridMismatch("custom_table has " + std::to_string(spec.table.size()) + " entries for n_v = " +
                           std::to_string(grid.size()));
      }
      double m = 0.0;
      for (double x : spec.table) m += x;
      m *= grid.dv();
      std::vector<double> v(spec.table);
      if (m != 0.0) {
        for (double& x : v) x *= spec.density / m;
      }
      return VelocityProfile(grid, std::move(v));
    }
  }
  throw InvalidArgument("unhandled profile kind");
}

PhaseField build_initial_data(const InitialDataSpec& spec, const GridX& gx, const GridV& gv) {
  spec.validate();
  const double delta = spec.amplitude;
  const double k = gx.fundamental() * spec.mode;
  PhaseField f(gx, gv);
  const VelocityProfile base = build_profile(spec.base, gv);
  for (std::size_t j = 0; j < gx.size(); ++j) {
    const double mod = delta * std::cos(k * gx.node(j));
    auto row = f.row(j);
    switch (spec.modulation) {
      case Modulation::density:
        for (std::size_t i = 0; i < gv.size(); ++i) row[i] = base[i] * (1.0 + mod);
        break;
      case Modulation::temperature: {
        if (!(1.0 + mod > 0.0)) throw NegativeDistribution("temperature modulation makes the temperature non-positive");
        ProfileSpec s = spec.base;
        s.temperature *= 1.0 + mod;
        s.beam_width *= std::sqrt(1.0 + mod);
        auto p = build_profile(s, gv);
        for (std::size_t i = 0; i < gv.size(); ++i) row[i] = p[i];
        break;
      }
      case Modulation::velocity: {
        ProfileSpec s = spec.base;
        s.mean += mod;
        auto p = build_profile(s, gv);
        for (std::size_t i = 0; i < gv.size(); ++i) row[i] = p[i];
        break;
      }
    }
  }
  for (double x : f.data()) {
    if (x < 0.0) throw NegativeDistribution("initial data has a negative value (" + std::to_string(x) + ")");
  }
  // Normalise the discrete mean density to exactly one so rho - 1 has no
  // spurious zero mode.
  const double mean_density = mass(f) / gx.length();
  if (!(mean_density > 0.0)) throw NegativeDistribution("initial data has zero mass");
  for (double& x : f.data()) x /= mean_density;
  return f;
}

bool is_one_bump(const VelocityProfile& p) {
  constexpr double tol = 1e-14;
  auto v = p.values();
  std::size_t i = 0;
  const std::size_t n = v.size();
  while (i + 1 < n && v[i + 1] >= v[i] - tol) ++i;
  while (i + 1 < n && v[i + 1] <= v[i] + tol) ++i;
  return i + 1 >= n;
}

}  // namespace penkin
