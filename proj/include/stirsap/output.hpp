#pragma once

// CSV tables, JSON metadata and run manifests. Files are written to a
// temporary sibling first and renamed into place.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "stirsap/experiments.hpp"
#include "stirsap/pulses.hpp"
#include "stirsap/types.hpp"

namespace stirsap {

inline constexpr std::string_view kToolVersion = "0.1.0";

// Shortest text that parses back to the same double.
std::string format_double(double value);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  void add_row(const std::vector<double>& values);
  void add_row(std::vector<std::string> cells);

  const std::vector<std::string>& header() const { return header_; }
  std::size_t rows() const { return rows_.size(); }
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

// t, omega_p, omega_s, omega_a, omega_p_tilde, omega_s_tilde
CsvTable pulse_table_csv(const PulseTable& table);

// t, p1, p2[, p3][, nx, ny, nz][, bx_hat, by_hat, bz_hat]. `field` is
// optional and must match the trajectory length when given.
CsvTable trajectory_csv(const Trajectory& trajectory, const std::vector<BlochVector>* field = nullptr);

// One column per sweep result; all results must share parameter values.
CsvTable sweep_csv(const std::vector<SweepResult>& results);

CsvTable speedup_csv(const SpeedupReport& report, double reference_rabi);

CsvTable cycles_csv(const std::vector<CycleRecord>& records);

CsvTable bloch_csv(const BlochComparison& comparison);

struct RunManifest {
  std::string command;
  std::string config_path;
  std::vector<std::string> overrides;
  std::string output_dir;
  bool seedless = true;  // every campaign is deterministic
  std::string tool_version{kToolVersion};
  std::string timestamp;

  friend bool operator==(const RunManifest&, const RunManifest&) = default;
};

nlohmann::json to_json(const RunManifest& manifest);
RunManifest manifest_from_json(const nlohmann::json& j);

// UTC, ISO 8601.
std::string utc_timestamp();

nlohmann::json to_json(const PropagationDiagnostics& diagnostics);

void write_file_atomic(const std::filesystem::path& path, std::string_view content);

// Writes <dir>/<name>.csv and <dir>/<name>.json, creating dir as needed.
void write_campaign(const std::filesystem::path& dir, const std::string& name, const CsvTable& table,
                    const nlohmann::json& metadata);

}  // namespace stirsap
