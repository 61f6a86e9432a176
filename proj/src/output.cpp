#include "stirsap/output.hpp"

#include <array>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "stirsap/errors.hpp"

namespace stirsap {

std::string format_double(double value) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) throw ContractError("could not format number");
  return std::string(buf.data(), ptr);
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {
  if (header_.empty()) throw ContractError("CSV table needs at least one column");
}

void CsvTable::add_row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_double(v));
  add_row(std::move(cells));
}

void CsvTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != header_.size()) {
    throw ContractError("CSV row has " + std::to_string(cells.size()) + " cells, expected " +
                        std::to_string(header_.size()));
  }
  rows_.push_back(std::move(cells));
}

std::string CsvTable::str() const {
  std::string out;
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(header_);
  for (const auto& row : rows_) line(row);
  return out;
}

CsvTable pulse_table_csv(const PulseTable& table) {
  CsvTable csv({"t", "omega_p", "omega_s", "omega_a", "omega_p_tilde", "omega_s_tilde"});
  for (const auto& r : table.rows) {
    csv.add_row({r.t, r.omega_p, r.omega_s, r.effective.omega_a, r.omega_p_tilde, r.omega_s_tilde});
  }
  return csv;
}

CsvTable trajectory_csv(const Trajectory& trajectory, const std::vector<BlochVector>* field) {
  if (trajectory.empty()) throw ContractError("empty trajectory");
  const std::size_t dim = trajectory.final_state().dimension();
  if (field && field->size() != trajectory.size()) throw ContractError("field track does not match trajectory");
  std::vector<std::string> header{"t", "p1", "p2"};
  if (dim == 3) header.emplace_back("p3");
  const bool bloch = trajectory.bloch.has_value();
  if (bloch) header.insert(header.end(), {"nx", "ny", "nz"});
  if (field) header.insert(header.end(), {"bx_hat", "by_hat", "bz_hat"});
  CsvTable csv(std::move(header));
  for (std::size_t i = 0; i < trajectory.size(); ++i) {
    std::vector<double> row{trajectory.times[i]};
    row.insert(row.end(), trajectory.populations[i].begin(), trajectory.populations[i].end());
    if (bloch) {
      const auto& n = (*trajectory.bloch)[i];
      row.insert(row.end(), {n.nx, n.ny, n.nz});
    }
    if (field) {
      const auto& b = (*field)[i];
      row.insert(row.end(), {b.nx, b.ny, b.nz});
    }
    csv.add_row(row);
  }
  return csv;
}

CsvTable sweep_csv(const std::vector<SweepResult>& results) {
  if (results.empty()) throw ContractError("no sweep results");
  std::vector<std::string> header{results.front().parameter_name};
  for (const auto& r : results) {
    if (r.parameter_values != results.front().parameter_values) {
      throw ContractError("sweep results use different parameter grids");
    }
    std::string column(to_string(r.protocol));
    if (!r.variant.empty()) column += "[" + r.variant + "]";
    header.push_back(std::move(column));
  }
  CsvTable csv(std::move(header));
  for (std::size_t i = 0; i < results.front().parameter_values.size(); ++i) {
    std::vector<double> row{results.front().parameter_values[i]};
    for (const auto& r : results) row.push_back(r.efficiencies[i]);
    csv.add_row(row);
  }
  return csv;
}

CsvTable speedup_csv(const SpeedupReport& report, double reference_rabi) {
  CsvTable csv({"peak", "peak_over_reference", "t_ap", "t_sa", "ratio", "difference_over_pi_time"});
  for (std::size_t i = 0; i < report.peaks.size(); ++i) {
    csv.add_row({report.peaks[i], report.peaks[i] / reference_rabi, report.t_ap[i], report.t_sa[i], report.ratio[i],
                 report.difference[i]});
  }
  return csv;
}

CsvTable cycles_csv(const std::vector<CycleRecord>& records) {
  CsvTable csv({"cycle", "p1", "p2"});
  for (const auto& r : records) csv.add_row({static_cast<double>(r.cycle), r.p1, r.p2});
  return csv;
}

CsvTable bloch_csv(const BlochComparison& c) {
  CsvTable csv({"t", "n0_x", "n0_y", "n0_z", "n_x", "n_y", "n_z", "n_tilde_x", "n_tilde_y", "n_tilde_z", "b0_hat_x",
                "b0_hat_y", "b0_hat_z", "b_hat_x", "b_hat_y", "b_hat_z"});
  for (std::size_t i = 0; i < c.times.size(); ++i) {
    std::vector<double> row{c.times[i]};
    for (const auto* track : {&c.n0, &c.n, &c.n_tilde, &c.b0_hat, &c.b_hat}) {
      const auto& v = (*track)[i];
      row.insert(row.end(), {v.nx, v.ny, v.nz});
    }
    csv.add_row(row);
  }
  return csv;
}

nlohmann::json to_json(const RunManifest& m) {
  return {{"command", m.command},       {"config_path", m.config_path}, {"overrides", m.overrides},
          {"output_dir", m.output_dir}, {"seedless", m.seedless},       {"tool_version", m.tool_version},
          {"timestamp", m.timestamp}};
}

RunManifest manifest_from_json(const nlohmann::json& j) {
  try {
    RunManifest m;
    m.command = j.at("command").get<std::string>();
    m.config_path = j.at("config_path").get<std::string>();
    m.overrides = j.at("overrides").get<std::vector<std::string>>();
    m.output_dir = j.at("output_dir").get<std::string>();
    m.seedless = j.at("seedless").get<bool>();
    m.tool_version = j.at("tool_version").get<std::string>();
    m.timestamp = j.at("timestamp").get<std::string>();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad manifest: ") + e.what(), 0);
  }
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

nlohmann::json to_json(const PropagationDiagnostics& d) {
  return {{"steps", d.steps},
          {"refinements", d.refinements},
          {"residual", d.residual},
          {"max_norm_deviation", d.max_norm_deviation}};
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw Error("failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error("cannot move output into place at " + path.string());
  }
}

void write_campaign(const std::filesystem::path& dir, const std::string& name, const CsvTable& table,
                    const nlohmann::json& metadata) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory " + dir.string() + ": " + ec.message());
  write_file_atomic(dir / (name + ".csv"), table.str());
  write_file_atomic(dir / (name + ".json"), metadata.dump(2) + "\n");
}

}  // namespace stirsap
