#include "penkin/core/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <json.hpp>

#include "penkin/error.hpp"

namespace penkin {
namespace {

namespace fs = std::filesystem;

fs::path with_ext(const fs::path& stem, const char* ext) {
  fs::path p = stem;
  p += ext;
  return p;
}

void write_doubles(const fs::path& path, std::span<const double> data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  std::vector<unsigned char> buf(data.size() * 8);
  for (std::size_t i = 0; i < data.size(); ++i) {
    auto bits = std::bit_cast<std::uint64_t>(data[i]);
    for (int b = 0; b < 8; ++b) buf[i * 8 + b] = static_cast<unsigned char>(bits >> (8 * b));
  }
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (!out) throw IoError("short write to " + path.string());
}

std::vector<double> read_doubles(const fs::path& path, std::size_t count) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<unsigned char> buf(count * 8);
  in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (in.gcount() != static_cast<std::streamsize>(buf.size())) throw IoError("truncated snapshot " + path.string());
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(buf[i * 8 + b]) << (8 * b);
    out[i] = std::bit_cast<double>(bits);
  }
  return out;
}

void write_sidecar(const fs::path& stem, const nlohmann::json& j) {
  std::ofstream out(with_ext(stem, ".json"));
  if (!out) throw IoError("cannot write sidecar for " + stem.string());
  out << j.dump(2) << "\n";
}

nlohmann::json read_sidecar(const fs::path& stem) {
  std::ifstream in(with_ext(stem, ".json"));
  if (!in) throw IoError("missing sidecar " + with_ext(stem, ".json").string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("bad sidecar: ") + e.what());
  }
}

}  // namespace

void write_snapshot(const fs::path& stem, const PhaseField& f, double time) {
  write_doubles(with_ext(stem, ".bin"), f.data());
  write_sidecar(stem, {{"kind", "phase"},
                       {"n_x", f.n_x()},
                       {"n_v", f.n_v()},
                       {"length", f.grid_x().length()},
                       {"v_max", f.grid_v().v_max()},
                       {"time", time}});
}

void write_snapshot(const fs::path& stem, const SpatialField& g, double time) {
  write_doubles(with_ext(stem, ".bin"), g.values());
  write_sidecar(stem, {{"kind", "spatial"},
                       {"n_x", g.size()},
                       {"n_v", 1},
                       {"length", g.grid().length()},
                       {"v_max", 0.0},
                       {"time", time}});
}

PhaseSnapshot read_phase_snapshot(const fs::path& stem) {
  auto j = read_sidecar(stem);
  if (j.value("kind", "phase") != "phase") throw IoError("snapshot is not a phase field");
  GridX gx(j.at("n_x").get<std::size_t>(), j.at("length").get<double>());
  GridV gv(j.at("n_v").get<std::size_t>(), j.at("v_max").get<double>());
  auto data = read_doubles(with_ext(stem, ".bin"), gx.size() * gv.size());
  return {PhaseField(gx, gv, std::move(data)), j.at("time").get<double>()};
}

SpatialSnapshot read_spatial_snapshot(const fs::path& stem) {
  auto j = read_sidecar(stem);
  if (j.value("kind", "spatial") != "spatial") throw IoError("snapshot is not a spatial field");
  GridX gx(j.at("n_x").get<std::size_t>(), j.at("length").get<double>());
  auto data = read_doubles(with_ext(stem, ".bin"), gx.size());
  return {SpatialField(gx, std::move(data)), j.at("time").get<double>()};
}

}  // namespace penkin
