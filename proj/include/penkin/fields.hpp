#pragma once

#include <string>

#include "penkin/core/field.hpp"

namespace penkin {

// vp: V - eps^2 V'' = rho - 1, E = -V'.  vdb: E = -rho' (V reported as rho).
struct FieldMode {
  enum class Kind { vp, vdb };
  Kind kind = Kind::vdb;
  double epsilon = 0.0;

  static FieldMode vp(double eps);
  static FieldMode vdb() { return {}; }
  void validate() const;
  bool operator==(const FieldMode&) const = default;
};

std::string to_string(const FieldMode& m);

struct FieldSolution {
  SpatialField V;
  SpatialField E;
  FieldMode mode;
};

FieldSolution solve_field(const SpatialField& rho, const FieldMode& mode);

// vp: (1/2) int V^2 + eps^2 |V'|^2 dx (spectral);  vdb: (1/2) int rho^2 dx.
double field_energy(const SpatialField& V, const FieldMode& mode);
// Same, refusing a solution produced in another mode.
double field_energy(const FieldSolution& s, const FieldMode& mode);

}  // namespace penkin
