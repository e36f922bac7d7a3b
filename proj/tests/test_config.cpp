#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "penkin/config.hpp"

using namespace penkin;
using nlohmann::json;

namespace {
json minimal() {
  return json::parse(R"({"grid": {"n_x": 32, "n_v": 128}, "initial": {"profile": {"kind": "maxwellian"}}})");
}

std::string schema_message(const json& j) {
  try {
    Config::from_json(j);
  } catch (const SchemaError& e) {
    return e.what();
  }
  return "";
}
}  // namespace

TEST_SUITE("config") {
  TEST_CASE("defaults are filled and round trip") {
    const auto c = Config::from_json(minimal());
    CHECK(c.grid.n_x == 32);
    CHECK(c.grid.v_max == 8.0);
    CHECK(c.solver.dt == 1.0 / 200.0);
    CHECK(c.penrose.n_sphere == 32);
    CHECK(c.c0 == 0.1);
    CHECK(c.study.epsilons.size() == 4);
    CHECK(c.study.unstable.kind == ProfileKind::two_stream);
    const auto text = serialize(c);
    const auto again = Config::from_json(json::parse(text));
    CHECK(serialize(again) == text);
  }

  TEST_CASE("all sections round trip") {
    auto j = minimal();
    j["solver"] = {{"mode", "vp"}, {"epsilon", 0.05}, {"dt", 0.01}, {"t_end", 0.3}, {"penrose_diagnostics", true}};
    j["penrose"] = {{"n_sphere", 20}, {"sigma_values", {0.0, 1.0, 4.0}}, {"c0", 0.2}};
    j["study"] = {{"epsilons", {0.5, 0.25}}, {"error_norms", {"L2_rho"}}, {"unstable", {{"kind", "two_stream"}, {"separation", 1.0}, {"beam_width", 0.1}}}};
    j["kernel"] = {{"n_t", 32}, {"gamma", 2.0}};
    j["initial"]["profile"]["table"] = std::vector<double>(4, 0.0);
    j["initial"]["profile"]["kind"] = "custom_table";
    j["initial"]["profile"]["table"] = std::vector<double>(128, 1.0);
    const auto c = Config::from_json(j);
    CHECK(c.solver_config().penrose_scan.has_value());
    CHECK(c.solver.mode == FieldMode::vp(0.05));
    CHECK(c.study.error_norms == std::vector<ErrorNorm>{ErrorNorm::L2_rho});
    CHECK(c.kernel.n_t == 32);
    const auto text = serialize(c);
    CHECK(serialize(Config::from_json(json::parse(text))) == text);
    const auto s = c.study_config("out");
    CHECK(s.epsilons == std::vector<double>{0.5, 0.25});
    CHECK(s.precheck_scan.n_sphere == 20);
  }

  TEST_CASE("unknown keys name their path") {
    auto j = minimal();
    j["study"] = {{"epsilonn", {0.1}}};
    CHECK(schema_message(j).find("/study/epsilonn") != std::string::npos);
    j = minimal();
    j["grid"]["nx"] = 3;
    CHECK(schema_message(j).find("/grid/nx") != std::string::npos);
    j = minimal();
    j["extra"] = 1;
    CHECK(schema_message(j).find("/extra") != std::string::npos);
  }

  TEST_CASE("invariants are checked") {
    auto j = minimal();
    j["grid"]["n_v"] = -4;
    CHECK(schema_message(j).find("/grid/n_v") != std::string::npos);
    j = minimal();
    j["grid"]["n_v"] = "many";
    CHECK(schema_message(j).find("/grid/n_v") != std::string::npos);
    j = minimal();
    j["solver"] = {{"mode", "vp"}, {"epsilon", 2.0}};
    CHECK(schema_message(j).find("/solver") != std::string::npos);
    j = minimal();
    j["initial"]["profile"]["temperature"] = -1.0;
    CHECK(schema_message(j).find("/initial/profile") != std::string::npos);
    j = minimal();
    j["study"] = {{"epsilons", {0.1, 0.2}}};
    CHECK(schema_message(j).find("/study") != std::string::npos);
    j = minimal();
    j.erase("initial");
    CHECK(schema_message(j).find("/initial") != std::string::npos);
    j = minimal();
    j["solver"] = {{"mode", "euler"}};
    CHECK(schema_message(j).find("/solver/mode") != std::string::npos);
  }

  TEST_CASE("files") {
    CHECK_THROWS_AS(parse_config("/nonexistent/c.json"), IoError);
    const auto p = std::filesystem::temp_directory_path() / "penkin_bad.json";
    std::ofstream(p) << "{ not json";
    CHECK_THROWS_AS(parse_config(p), SchemaError);
    std::filesystem::remove(p);
    for (const char* name : {"maxwellian.json", "two_stream_cold.json"}) {
      CHECK_NOTHROW(parse_config(std::filesystem::path(PENKIN_DATA_DIR) / "configs" / name));
    }
  }
}
