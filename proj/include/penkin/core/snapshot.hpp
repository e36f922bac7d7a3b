#pragma once

#include <filesystem>

#include "penkin/core/field.hpp"

namespace penkin {

// Binary snapshot: little-endian float64, row-major (x outer, v inner), in
// `<stem>.bin`, with a JSON sidecar `<stem>.json` holding
// {"kind", "n_x", "n_v", "length", "v_max", "time"}. Spatial fields are
// stored with kind "spatial", n_v = 1 and v_max = 0.
void write_snapshot(const std::filesystem::path& stem, const PhaseField& f, double time);
void write_snapshot(const std::filesystem::path& stem, const SpatialField& g, double time);

struct PhaseSnapshot {
  PhaseField field;
  double time;
};
struct SpatialSnapshot {
  SpatialField field;
  double time;
};

PhaseSnapshot read_phase_snapshot(const std::filesystem::path& stem);
SpatialSnapshot read_spatial_snapshot(const std::filesystem::path& stem);

}  // namespace penkin
