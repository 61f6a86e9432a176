#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "stirsap/cli.hpp"
#include "stirsap/output.hpp"

using namespace stirsap;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("stirsap_cli_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

nlohmann::json read_json(const std::filesystem::path& p) {
  std::ifstream in(p);
  return nlohmann::json::parse(in);
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("dynamics writes csv and metadata and prints P2") {
    const auto dir = scratch_dir("dynamics");
    const auto r = run({"dynamics", "--out", dir.string(), "--protocol", "stirap", "--set", "cycles=2"});
    REQUIRE(r.code == kExitSuccess);
    CHECK(r.out.find("P2 = 0.33") != std::string::npos);
    CHECK(std::filesystem::exists(dir / "dynamics.csv"));
    const auto meta = read_json(dir / "dynamics.json");
    const auto manifest = manifest_from_json(meta["manifest"]);
    CHECK(manifest.command == "dynamics");
    CHECK(manifest.overrides == std::vector<std::string>{"cycles=2", "protocol = stirap"});
    CHECK(meta["config"]["options"]["protocol"] == "STIRAP");
    CHECK(meta["diagnostics"]["refinements"].get<int>() >= 1);
    CHECK(meta.contains("wall_time_s"));
    std::filesystem::remove_all(dir);
  }

  TEST_CASE("config file and quiet mode") {
    const auto dir = scratch_dir("config");
    std::filesystem::create_directories(dir);
    {
      std::ofstream cfg(dir / "run.cfg");
      cfg << "# shorter pulses\ntotal_time = 0.2 ms\ncycles = 2\n";
    }
    const auto r = run({"cycles", "--config", (dir / "run.cfg").string(), "--out", dir.string(), "--quiet"});
    REQUIRE(r.code == kExitSuccess);
    CHECK(r.out.empty());
    const auto meta = read_json(dir / "cycles.json");
    CHECK(meta["results"].size() == 3);
    CHECK(meta["config"]["pulses"]["total_time"].get<double>() == doctest::Approx(0.2e-3));
    std::filesystem::remove_all(dir);
  }

  TEST_CASE("exit codes") {
    CHECK(run({}).code == kExitUsage);
    CHECK(run({"--help"}).code == kExitSuccess);
    CHECK(run({"dynamics", "--no-such-flag"}).code == kExitUsage);
    CHECK(run({"frobnicate"}).code == kExitUsage);

    const auto missing = run({"dynamics", "--config", "/nonexistent/file.cfg"});
    CHECK(missing.code == kExitFailure);
    CHECK(missing.err.find("cannot read") != std::string::npos);

    const auto bad = run({"dynamics", "--set", "width = 0 ms", "--out", scratch_dir("bad").string()});
    CHECK(bad.code == kExitFailure);
    CHECK(bad.err.find("sigma > 0") != std::string::npos);

    CHECK(run({"dynamics", "--set", "novalue"}).code == kExitFailure);
  }

  TEST_CASE("identical runs give byte-identical csv") {
    const auto a = scratch_dir("repeat_a");
    const auto b = scratch_dir("repeat_b");
    REQUIRE(run({"sweep-delay", "-q", "--set", "sweep_samples = 5", "--threads", "1", "--out", a.string()}).code == 0);
    REQUIRE(run({"sweep-delay", "-q", "--set", "sweep_samples = 5", "--threads", "1", "--out", b.string()}).code == 0);
    auto slurp = [](const std::filesystem::path& p) {
      std::ifstream in(p);
      std::ostringstream ss;
      ss << in.rdbuf();
      return ss.str();
    };
    const auto text = slurp(a / "sweep-delay.csv");
    CHECK(text == slurp(b / "sweep-delay.csv"));
    CHECK(text.rfind("delay_ratio,STIRSAP[fixed-shape],STIRSAP[adapted-shape]\n", 0) == 0);
    std::filesystem::remove_all(a);
    std::filesystem::remove_all(b);
  }

  TEST_CASE("validate reports each check") {
    const auto ok = run({"validate"});
    CHECK(ok.code == kExitSuccess);
    CHECK(ok.out.find("ok   width") != std::string::npos);
    CHECK(ok.out.find("large detuning: yes") != std::string::npos);
  }

  TEST_CASE("output directory from the environment") {
    const auto dir = scratch_dir("env");
    setenv("STIRSAP_OUT_DIR", dir.string().c_str(), 1);
    const auto r = run({"pulses", "-q"});
    unsetenv("STIRSAP_OUT_DIR");
    REQUIRE(r.code == kExitSuccess);
    CHECK(std::filesystem::exists(dir / "pulses.csv"));
    std::filesystem::remove_all(dir);
  }
}
