#include <charconv>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "doctest.h"
#include "stirsap/errors.hpp"
#include "stirsap/output.hpp"

using namespace stirsap;

namespace {

std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("stirsap_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE("output") {
  TEST_CASE("doubles round trip through their text form") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int i = 0; i < 1000; ++i) {
      const double x = u(rng) * std::pow(10.0, i % 40 - 20);
      const auto text = format_double(x);
      double back = 0.0;
      std::from_chars(text.data(), text.data() + text.size(), back);
      CHECK(back == x);
    }
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(1e-300) == "1e-300");
  }

  TEST_CASE("csv layout") {
    CsvTable t({"a", "b"});
    t.add_row(std::vector<double>{1.0, 0.25});
    t.add_row(std::vector<std::string>{"x", "y"});
    CHECK(t.str() == "a,b\n1,0.25\nx,y\n");
    CHECK_THROWS_AS(t.add_row(std::vector<double>{1.0}), ContractError);
    CHECK_THROWS_AS(CsvTable({}), ContractError);
  }

  TEST_CASE("trajectory and pulse tables") {
    Trajectory traj;
    traj.times = {0.0, 1.0};
    traj.states = {StateVector::basis(2, 0), StateVector::basis(2, 1)};
    traj.populations = {{1.0, 0.0}, {0.0, 1.0}};
    traj.bloch = std::vector<BlochVector>{{0, 0, 1}, {0, 0, -1}};
    const std::vector<BlochVector> field{{1, 0, 0}, {0, 1, 0}};
    const auto csv = trajectory_csv(traj, &field);
    CHECK(csv.header() == std::vector<std::string>{"t", "p1", "p2", "nx", "ny", "nz", "bx_hat", "by_hat", "bz_hat"});
    CHECK(csv.rows() == 2);
    const std::vector<BlochVector> short_field{{1, 0, 0}};
    CHECK_THROWS_AS(trajectory_csv(traj, &short_field), ContractError);

    Trajectory three;
    three.times = {0.0};
    three.states = {StateVector::basis(3, 0)};
    three.populations = {{1.0, 0.0, 0.0}};
    CHECK(trajectory_csv(three).header() == std::vector<std::string>{"t", "p1", "p2", "p3"});

    PulseTable table;
    table.rows.push_back({});
    CHECK(pulse_table_csv(table).header() ==
          std::vector<std::string>{"t", "omega_p", "omega_s", "omega_a", "omega_p_tilde", "omega_s_tilde"});
  }

  TEST_CASE("sweep tables need a shared grid") {
    SweepResult a{"epsilon", {0.9, 1.0}, {0.8, 1.0}, Protocol::Stirsap, "", {}, {}};
    SweepResult b{"epsilon", {0.9, 1.0}, {0.9, 1.0}, Protocol::ResonantPi, "", {}, {}};
    CHECK(sweep_csv({a, b}).str() == "epsilon,STIRSAP,ResonantPi\n0.9,0.8,0.9\n1,1,1\n");
    b.parameter_values = {0.9};
    CHECK_THROWS_AS(sweep_csv({a, b}), ContractError);
  }

  TEST_CASE("manifest json round trip is exact") {
    RunManifest m;
    m.command = "speedup";
    m.config_path = "configs/reference.cfg";
    m.overrides = {"total_time = 1 ms", "threads = 2"};
    m.output_dir = "out";
    m.timestamp = utc_timestamp();
    const auto text = to_json(m).dump();
    const auto back = manifest_from_json(nlohmann::json::parse(text));
    CHECK(back == m);
    CHECK(to_json(back).dump() == text);
    CHECK(m.tool_version == std::string(kToolVersion));
    CHECK_THROWS_AS(manifest_from_json(nlohmann::json::object()), ParseError);
  }

  TEST_CASE("campaign files are written atomically") {
    const auto dir = scratch_dir("campaign");
    CsvTable t({"x"});
    t.add_row(std::vector<double>{2.0});
    write_campaign(dir / "nested", "demo", t, {{"k", 1}});
    CHECK(slurp(dir / "nested" / "demo.csv") == "x\n2\n");
    CHECK(nlohmann::json::parse(slurp(dir / "nested" / "demo.json"))["k"] == 1);
    CHECK_FALSE(std::filesystem::exists(dir / "nested" / "demo.csv.tmp"));
    // Overwrite replaces the content wholesale.
    write_file_atomic(dir / "nested" / "demo.csv", "y\n");
    CHECK(slurp(dir / "nested" / "demo.csv") == "y\n");
    CHECK_THROWS_AS(write_file_atomic(dir / "missing" / "f.txt", "z"), Error);
    std::filesystem::remove_all(dir);
  }
}
