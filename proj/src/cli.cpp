#include "stirsap/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "stirsap/config.hpp"
#include "stirsap/errors.hpp"
#include "stirsap/experiments.hpp"
#include "stirsap/hamiltonian.hpp"
#include "stirsap/output.hpp"

namespace stirsap {

namespace {

struct GlobalArgs {
  std::string config_path;
  std::string out_dir;
  std::string protocol;
  std::string total_time;
  std::vector<std::string> sets;
  int threads = -1;
  bool quiet = false;
  bool verbose = false;
  bool three_level = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> collect_overrides(const GlobalArgs& g) {
  std::vector<std::string> lines;
  for (const auto& s : g.sets) {
    if (s.find('=') == std::string::npos) throw ParseError("--set expects key=value, got '" + s + "'", 0);
    lines.push_back(s);
  }
  if (!g.protocol.empty()) lines.push_back("protocol = " + g.protocol);
  if (!g.total_time.empty()) lines.push_back("total_time = " + g.total_time);
  if (g.threads >= 0) lines.push_back("threads = " + std::to_string(g.threads));
  return lines;
}

class Session {
 public:
  Session(std::string command, const GlobalArgs& g, std::ostream& out, std::ostream& err)
      : command_(std::move(command)), args_(g), out_(out), err_(err), start_(std::chrono::steady_clock::now()) {
    manifest_.command = command_;
    manifest_.config_path = g.config_path;
    manifest_.overrides = collect_overrides(g);
    manifest_.output_dir = g.out_dir;
    manifest_.timestamp = utc_timestamp();
    const std::string text = g.config_path.empty() ? std::string() : read_file(g.config_path);
    config_ = parse_config(text, manifest_.overrides);
    options_.threads = config_.options.threads;
    options_.propagation.base_steps = config_.options.grid_samples;
  }

  const RunConfig& config() const { return config_; }
  const ExperimentOptions& options() const { return options_; }
  const GlobalArgs& args() const { return args_; }

  void info(const std::string& line) const {
    if (!args_.quiet) out_ << line << '\n';
  }
  void progress(const std::string& line) const {
    if (args_.verbose && !args_.quiet) err_ << line << '\n';
  }

  void finish(const CsvTable& table, nlohmann::json results, const nlohmann::json& diagnostics = nullptr) const {
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    nlohmann::json meta{
        {"manifest", to_json(manifest_)},
        {"config", to_json(config_)},
        {"tolerances",
         {{"population_tolerance", options_.propagation.population_tolerance},
          {"base_steps", options_.propagation.base_steps},
          {"max_refinements", options_.propagation.max_refinements},
          {"fidelity_target", config_.options.fidelity_target}}},
        {"wall_time_s", wall},
        {"results", std::move(results)},
    };
    if (!diagnostics.is_null()) meta["diagnostics"] = diagnostics;
    write_campaign(manifest_.output_dir, command_, table, meta);
    info("wrote " + (std::filesystem::path(manifest_.output_dir) / (command_ + ".csv")).string());
  }

 private:
  std::string command_;
  GlobalArgs args_;
  std::ostream& out_;
  std::ostream& err_;
  std::chrono::steady_clock::time_point start_;
  RunManifest manifest_;
  RunConfig config_;
  ExperimentOptions options_;
};

std::vector<double> pi_time_multiples(const Session& s) {
  std::vector<double> times;
  for (double m : s.config().options.time_grid) times.push_back(m * s.config().system.pi_time());
  return times;
}

void cmd_dynamics(const Session& s) {
  const auto& c = s.config();
  const Protocol protocol = c.options.protocol;
  if (s.args().three_level) {
    if (protocol == Protocol::ResonantPi) throw DomainError("three-level dynamics supports STIRAP and STIRSAP");
    const auto program = protocol_program(protocol, c.pulses, c.system);
    PropagationOptions opts = s.options().propagation;
    opts.record_bloch = false;
    const auto traj = propagate(HamiltonianKind::Lambda3, program, c.system, StateVector::basis(3, 0), opts);
    const auto& pops = traj.populations.back();
    double max_p3 = 0.0;
    for (const auto& p : traj.populations) max_p3 = std::max(max_p3, p[2]);
    s.finish(trajectory_csv(traj),
             {{"protocol", to_string(protocol)}, {"p2", pops[1]}, {"max_p3", max_p3}, {"levels", 3}},
             to_json(traj.diagnostics));
    s.info("P2 = " + format_double(pops[1]));
    return;
  }
  const auto traj = run_dynamics(protocol, c.pulses, c.system, s.options());
  // Field of the effective Hamiltonian actually driving the system.
  std::vector<BlochVector> field;
  const auto program = protocol_program(protocol, c.pulses, c.system);
  for (const auto& d : program.sample(traj.times, c.system, false)) {
    field.push_back(
        effective_field(detail::hamiltonian2(HamiltonianKind::EffectiveH0, d, c.system, c.pulses.laser_phase))
            .direction);
  }
  const double p2 = transfer_efficiency(traj, 1);
  s.finish(trajectory_csv(traj, &field),
           {{"protocol", to_string(protocol)}, {"p2", p2}, {"levels", 2}}, to_json(traj.diagnostics));
  s.info("P2 = " + format_double(p2));
}

void cmd_sweep_time(const Session& s) {
  const auto& c = s.config();
  const auto times = pi_time_multiples(s);
  std::vector<SweepResult> results;
  for (const Protocol p : {Protocol::Stirap, Protocol::Stirsap}) {
    s.progress("sweeping " + std::string(to_string(p)));
    results.push_back(efficiency_vs_time(p, times, c.pulses, c.system, s.options()));
  }
  nlohmann::json summary;
  for (const auto& r : results) summary[std::string(to_string(r.protocol))] = r.efficiencies;
  summary["total_time"] = times;
  s.finish(sweep_csv(results), summary);
}

void cmd_sweep_amplitude(const Session& s) {
  const auto& c = s.config();
  auto spec = RobustnessSpec::defaults(RobustnessAxis::Amplitude);
  spec.samples = c.options.sweep_samples;
  std::vector<SweepResult> results;
  spec.protocols = {Protocol::ResonantPi};
  results.push_back(robustness_sweep(spec, c.pulses, c.system, s.options()).front());
  spec.protocols = {Protocol::Stirsap};
  for (const double t : {c.pulses.total_time, c.options.comparison_time}) {
    s.progress("amplitude sweep at T = " + format_double(t) + " s");
    auto r = robustness_sweep(spec, c.pulses.with_total_time(t), c.system, s.options()).front();
    r.variant = "T=" + format_double(t);
    results.push_back(std::move(r));
  }
  nlohmann::json summary;
  for (const auto& r : results) {
    summary[std::string(to_string(r.protocol)) + (r.variant.empty() ? "" : "[" + r.variant + "]")] = {
        {"min", *std::min_element(r.efficiencies.begin(), r.efficiencies.end())}};
  }
  s.finish(sweep_csv(results), summary);
}

void robustness_command(const Session& s, RobustnessAxis axis, bool both_shapes) {
  const auto& c = s.config();
  auto spec = RobustnessSpec::defaults(axis);
  spec.samples = c.options.sweep_samples;
  std::vector<SweepResult> results;
  for (const bool adapt : both_shapes ? std::vector<bool>{false, true} : std::vector<bool>{false}) {
    spec.adapt_shapes = adapt;
    for (auto& r : robustness_sweep(spec, c.pulses, c.system, s.options())) results.push_back(std::move(r));
  }
  nlohmann::json summary;
  for (const auto& r : results) {
    summary[std::string(to_string(r.protocol)) + (r.variant.empty() ? "" : "[" + r.variant + "]")] = {
        {"min", *std::min_element(r.efficiencies.begin(), r.efficiencies.end())}};
  }
  s.finish(sweep_csv(results), summary);
}

void cmd_peaks(const Session& s) {
  const auto& c = s.config();
  const double t0 = c.system.pi_time();
  const double omega0 = c.system.reference_rabi;
  CsvTable table({"total_time_over_pi_time", "total_time", "stirap_peak", "stirsap_peak", "stirap_peak_over_reference",
                  "stirsap_peak_over_reference", "stirap_efficiency", "stirsap_efficiency"});
  nlohmann::json rows = nlohmann::json::array();
  for (const double m : c.options.time_grid) {
    s.progress("peak search at T = " + format_double(m) + " T0");
    const auto ap = required_peak(Protocol::Stirap, m * t0, c.options.fidelity_target, c.pulses, c.system,
                                  s.options());
    const auto sa = required_peak(Protocol::Stirsap, m * t0, c.options.fidelity_target, c.pulses, c.system,
                                  s.options());
    table.add_row({m, m * t0, ap.peak, sa.peak, ap.peak / omega0, sa.peak / omega0, ap.efficiency, sa.efficiency});
    rows.push_back({{"t_over_pi_time", m}, {"stirap", ap.peak / omega0}, {"stirsap", sa.peak / omega0}});
  }
  s.finish(table, rows);
}

void cmd_speedup(const Session& s) {
  const auto& c = s.config();
  std::vector<double> peaks;
  for (double f : c.options.peak_grid()) peaks.push_back(f * c.system.reference_rabi);
  const auto report = speedup_analysis(peaks, c.options.fidelity_target, c.pulses, c.system, s.options());
  const auto [lo, hi] = std::minmax_element(report.ratio.begin(), report.ratio.end());
  s.finish(speedup_csv(report, c.system.reference_rabi),
           {{"argmax_difference_peak_over_reference", report.argmax_difference_peak() / c.system.reference_rabi},
            {"ratio_min", *lo},
            {"ratio_max", *hi}});
}

void cmd_cycles(const Session& s) {
  const auto& c = s.config();
  const double p1 = c.options.initial_population_1;
  Eigen::VectorXcd amps(2);
  amps << std::sqrt(p1), std::polar(std::sqrt(1.0 - p1), c.options.initial_phase);
  const auto records =
      multi_cycle(StateVector::normalized(amps), c.options.cycles, c.pulses, c.system, c.options.protocol, s.options());
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : records) rows.push_back({{"cycle", r.cycle}, {"p1", r.p1}, {"p2", r.p2}});
  s.finish(cycles_csv(records), rows);
}

void cmd_bloch(const Session& s) {
  const auto& c = s.config();
  const auto cmp = bloch_comparison(c.pulses, c.system, s.options());
  // Largest angle of each Bloch track from the field direction of H0.
  double max_n0 = 0.0;
  double max_n = 0.0;
  double max_n_tilde = 0.0;
  for (std::size_t i = 0; i < cmp.times.size(); ++i) {
    max_n0 = std::max(max_n0, cmp.n0[i].angle_to(cmp.b0_hat[i]));
    max_n = std::max(max_n, cmp.n[i].angle_to(cmp.b0_hat[i]));
    max_n_tilde = std::max(max_n_tilde, cmp.n_tilde[i].angle_to(cmp.b0_hat[i]));
  }
  s.finish(bloch_csv(cmp),
           {{"max_angle_n0_b0_hat", max_n0},
            {"max_angle_n_b0_hat", max_n},
            {"max_angle_n_tilde_b0_hat", max_n_tilde},
            {"p2_h0", transfer_efficiency(cmp.h0, 1)},
            {"p2_total", transfer_efficiency(cmp.total, 1)},
            {"p2_tilde", transfer_efficiency(cmp.tilde, 1)}},
           {{"h0", to_json(cmp.h0.diagnostics)},
            {"total", to_json(cmp.total.diagnostics)},
            {"tilde", to_json(cmp.tilde.diagnostics)}});
}

void cmd_pulses(const Session& s) {
  const auto& c = s.config();
  const auto table = stirsap_pulses(c.pulses, c.system, c.options.grid_samples);
  s.finish(pulse_table_csv(table), {{"shortcut_peak", table.shortcut_peak()},
                                    {"original_peak", table.original_peak()},
                                    {"flagged_samples", table.flagged}});
  if (!table.flagged.empty()) {
    s.info("warning: " + std::to_string(table.flagged.size()) + " samples failed the phase-derivative check");
  }
}

int cmd_validate(const Session& s, std::ostream& out) {
  const auto& c = s.config();
  const auto report = validate_config(c.pulses, c.system);
  for (const auto& check : report.checks) {
    out << (check.passed ? "ok   " : "FAIL ") << check.name;
    if (!check.message.empty()) out << ": " << check.message;
    out << '\n';
  }
  out << "large detuning: " << (report.large_detuning ? "yes" : "no") << '\n';
  return report.valid() ? kExitSuccess : kExitFailure;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stimulated Raman transfer and its shortcut: simulation campaigns", "stirsap"};
  app.require_subcommand(1);
  GlobalArgs g;
  if (const char* env = std::getenv("STIRSAP_OUT_DIR")) g.out_dir = env;
  if (g.out_dir.empty()) g.out_dir = "out";

  app.add_option("--config", g.config_path, "key = value configuration file");
  app.add_option("--out", g.out_dir, "output directory (default $STIRSAP_OUT_DIR or ./out)");
  app.add_option("--protocol", g.protocol, "stirap, stirsap or resonant-pi");
  app.add_option("--total-time", g.total_time, "operation time, e.g. 0.4ms");
  app.add_option("--set", g.sets, "extra key=value config line (repeatable)");
  app.add_option("--threads", g.threads, "worker threads, 0 = all cores")->check(CLI::NonNegativeNumber);
  auto* quiet = app.add_flag("--quiet,-q", g.quiet, "print nothing but errors");
  app.add_flag("--verbose,-v", g.verbose, "report progress on stderr")->excludes(quiet);

  struct Command {
    const char* name;
    const char* help;
  };
  const Command commands[] = {
      {"dynamics", "population dynamics for one protocol"},
      {"sweep-time", "efficiency versus operation time"},
      {"sweep-amplitude", "efficiency versus pulse-area error"},
      {"sweep-delay", "efficiency versus pulse delay, fixed and adapted shapes"},
      {"sweep-detuning", "efficiency versus single-photon detuning offset"},
      {"peaks", "minimal peak Rabi frequency per operation time"},
      {"speedup", "shortest operation time per peak constraint"},
      {"cycles", "repeated transfer cycles"},
      {"bloch", "Bloch vectors and effective fields under H0, H and H~"},
      {"pulses", "original and reshaped pulse table"},
      {"validate", "check a configuration"},
  };
  for (const auto& c : commands) {
    auto* sub = app.add_subcommand(c.name, c.help)->fallthrough();
    if (std::string_view(c.name) == "dynamics") {
      sub->add_flag("--three-level", g.three_level, "propagate the full three-level system");
    }
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitSuccess : kExitUsage;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    Session session(name, g, out, err);
    if (name == "dynamics") cmd_dynamics(session);
    else if (name == "sweep-time") cmd_sweep_time(session);
    else if (name == "sweep-amplitude") cmd_sweep_amplitude(session);
    else if (name == "sweep-delay") robustness_command(session, RobustnessAxis::Delay, true);
    else if (name == "sweep-detuning") robustness_command(session, RobustnessAxis::Detuning, false);
    else if (name == "peaks") cmd_peaks(session);
    else if (name == "speedup") cmd_speedup(session);
    else if (name == "cycles") cmd_cycles(session);
    else if (name == "bloch") cmd_bloch(session);
    else if (name == "pulses") cmd_pulses(session);
    else if (name == "validate") return cmd_validate(session, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitSuccess;
}

}  // namespace stirsap
