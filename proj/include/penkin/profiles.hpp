#pragma once

#include <string>
#include <vector>

#include "penkin/core/field.hpp"

namespace penkin {

enum class ProfileKind { maxwellian, two_stream, bump_on_tail, custom_table };

// Parameters are shared between kinds; each kind reads the ones it needs:
//   maxwellian    density, mean, temperature
//   two_stream    density, mean, separation (half-separation a), beam_width
//   bump_on_tail  density, mean, temperature, separation (beam offset from
//                 mean), beam_width, beam_fraction
//   custom_table  density, table (one value per velocity node)
struct ProfileSpec {
  ProfileKind kind = ProfileKind::maxwellian;
  double density = 1.0;
  double mean = 0.0;
  double temperature = 1.0;
  double separation = 0.0;
  double beam_width = 1.0;
  double beam_fraction = 0.0;
  std::vector<double> table;

  void validate() const;
};

enum class Modulation { density, temperature, velocity };

struct InitialDataSpec {
  ProfileSpec base;
  double amplitude = 0.0;  // delta
  int mode = 1;            // k0, in units of the fundamental 2 pi / L
  Modulation modulation = Modulation::density;

  void validate() const;
};

std::string to_string(ProfileKind k);
ProfileKind profile_kind_from_string(const std::string& s);
std::string to_string(Modulation m);
Modulation modulation_from_string(const std::string& s);

// density (2 pi T)^{-1/2} exp(-(v - u)^2 / (2 T)).
VelocityProfile build_maxwellian(const ProfileSpec& spec, const GridV& grid);
// Equal-mass Maxwellians at mean +- a with temperature beam_width^2.
VelocityProfile build_two_stream(const ProfileSpec& spec, const GridV& grid);
VelocityProfile build_bump_on_tail(const ProfileSpec& spec, const GridV& grid);
VelocityProfile build_profile(const ProfileSpec& spec, const GridV& grid);

// Modulated profile p(x, v), rescaled after discretisation so that the mean
// density is exactly one. Throws NegativeDistribution on any negative value.
PhaseField build_initial_data(const InitialDataSpec& spec, const GridX& gx, const GridV& gv);

// True when the samples rise then fall (ties within 1e-14 allowed).
bool is_one_bump(const VelocityProfile& p);

}  // namespace penkin
