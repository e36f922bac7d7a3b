#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "penkin/cli.hpp"

using namespace penkin;
namespace fs = std::filesystem;

namespace {
struct Result {
  int code;
  std::string out, err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream o, e;
  const int c = dispatch(args, o, e);
  return {c, o.str(), e.str()};
}

std::string cfg(const char* name) { return (fs::path(PENKIN_DATA_DIR) / "configs" / name).string(); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}
}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("usage") {
    const auto r = call({});
    CHECK(r.code == 1);
    CHECK(r.err.find("Usage") != std::string::npos);
    CHECK(call({"frobnicate"}).code == 1);
    CHECK(call({"--help"}).code == 0);
  }

  TEST_CASE("penrose check") {
    const auto ok = call({"penrose", "check", "--config", cfg("maxwellian.json")});
    CHECK(ok.code == 0);
    const auto j = nlohmann::json::parse(ok.out);
    CHECK(j.at("stable").get<bool>());
    CHECK(j.at("margin").get<double>() > 0.9);

    const auto bad = call({"penrose", "check", "--config", cfg("two_stream_cold.json"), "--c0", "0.1"});
    CHECK(bad.code == 2);
    CHECK_FALSE(nlohmann::json::parse(bad.out).at("stable").get<bool>());
  }

  TEST_CASE("errors are one line") {
    const auto r = call({"penrose", "check", "--config", "/nonexistent.json"});
    CHECK(r.code == 1);
    CHECK(r.err.find("IoError") != std::string::npos);
    CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 1);
    CHECK(call({"simulate", "--config", cfg("maxwellian.json"), "--mode", "vdb", "--epsilon", "0.1"}).code == 1);
    CHECK(call({"validate", "refine", "--config", cfg("maxwellian.json"), "--levels", "1"}).code == 1);
  }

  TEST_CASE("simulate writes a reproducible directory") {
    const fs::path a = fs::temp_directory_path() / "penkin_cli_a", b = fs::temp_directory_path() / "penkin_cli_b";
    fs::remove_all(a);
    fs::remove_all(b);
    const auto r = call({"--threads", "1", "simulate", "--config", cfg("maxwellian.json"), "--mode", "vp", "--epsilon",
                         "0.2", "--out", a.string()});
    REQUIRE(r.code == 0);
    for (const char* f : {"config.json", "trace.csv", "energy.dat", "f_0.bin", "f_0.json"}) CHECK(fs::exists(a / f));
    CHECK(slurp(a / "config.json").find("0.2") != std::string::npos);

    const auto r2 = call({"--threads", "2", "simulate", "--config", (a / "config.json").string(), "--out", b.string()});
    REQUIRE(r2.code == 0);
    for (const auto& e : fs::directory_iterator(a)) CHECK(slurp(e.path()) == slurp(b / e.path().filename()));
    fs::remove_all(a);
    fs::remove_all(b);
  }

  TEST_CASE("study and validate subcommands") {
    const fs::path d = fs::temp_directory_path() / "penkin_cli_study";
    fs::remove_all(d);
    const auto q = call({"study", "quasineutral", "--config", cfg("maxwellian.json"), "--epsilons", "0.2,0.1", "--out",
                         d.string()});
    CHECK(q.code == 0);
    CHECK(fs::exists(d / "study.csv"));
    CHECK(fs::exists(d / "config.json"));
    CHECK(std::count(q.out.begin(), q.out.end(), '\n') == 4);
    CHECK(call({"study", "quasineutral", "--config", cfg("maxwellian.json"), "--epsilons", "0.2,x"}).code == 1);

    const auto v = call({"validate", "refine", "--config", cfg("maxwellian.json"), "--levels", "2"});
    CHECK(v.code == 0);
    CHECK(v.out.rfind("level,dt,n_v,difference,order", 0) == 0);

    const auto un = call({"study", "quasineutral", "--config", cfg("two_stream_cold.json")});
    CHECK(un.code == 2);
    fs::remove_all(d);
  }
}
