#include "stirsap/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "stirsap/errors.hpp"
#include "stirsap/parallel.hpp"
#include "stirsap/search.hpp"

namespace stirsap {

PulseProgram protocol_program(Protocol protocol, const PulseConfig& cfg, const SystemConfig& design,
                              ExecutionOffsets offsets) {
  switch (protocol) {
    case Protocol::Stirap:
      require_valid(cfg, design);
      return PulseProgram::gaussian(cfg, offsets);
    case Protocol::Stirsap:
      return PulseProgram::shortcut(cfg, design, offsets);
    case Protocol::ResonantPi: {
      const double area = std::numbers::pi * offsets.amplitude_scale;
      return resonant_area_program(area, design.pi_time(), design);
    }
  }
  throw ContractError("unknown protocol");
}

double program_efficiency(const PulseProgram& program, const SystemConfig& system,
                          const PropagationOptions& options) {
  PropagationOptions quiet = options;
  quiet.recorded_intervals = 1;
  quiet.record_bloch = false;
  const auto traj = propagate(HamiltonianKind::EffectiveH0, program, system, StateVector::basis(2, 0), quiet);
  return transfer_efficiency(traj, 1);
}

Trajectory run_dynamics(Protocol protocol, const PulseConfig& cfg, const SystemConfig& system,
                        const ExperimentOptions& options) {
  const auto program = protocol_program(protocol, cfg, system);
  return propagate(HamiltonianKind::EffectiveH0, program, system, StateVector::basis(2, 0), options.propagation);
}

SweepResult efficiency_vs_time(Protocol protocol, std::span<const double> total_times, const PulseConfig& base,
                               const SystemConfig& system, const ExperimentOptions& options) {
  for (double t : total_times) {
    if (!(t > 0.0)) throw DomainError("operation times must be positive");
  }
  SweepResult result;
  result.parameter_name = "total_time";
  result.parameter_values.assign(total_times.begin(), total_times.end());
  result.protocol = protocol;
  result.pulses = base;
  result.system = system;
  result.efficiencies = parallel_map(total_times.size(), options.threads, [&](std::size_t i) {
    const auto cfg = base.with_total_time(total_times[i]);
    return program_efficiency(protocol_program(protocol, cfg, system), system, options.propagation);
  });
  return result;
}

namespace {

double realised_peak(Protocol protocol, const PulseConfig& cfg, const SystemConfig& system) {
  if (protocol == Protocol::Stirsap) return stirsap_pulses(cfg, system).shortcut_peak();
  return cfg.max_peak();
}

}  // namespace

PeakResult required_peak(Protocol protocol, double total_time, double fidelity_target, const PulseConfig& base,
                         const SystemConfig& system, const ExperimentOptions& options,
                         const PeakSearchOptions& search) {
  if (protocol == Protocol::ResonantPi) throw ContractError("peak search applies to STIRAP and STIRSAP");
  if (!(fidelity_target >= 0.0 && fidelity_target < 1.0)) {
    throw DomainError("fidelity target must lie in [0, 1)");
  }
  const double omega0 = system.reference_rabi;
  const double base_peak = base.max_peak();
  if (!(base_peak > 0.0)) throw DomainError("base pulses must have a positive peak");
  const auto shape = base.with_total_time(total_time);
  auto at_amplitude = [&](double amplitude) { return shape.scaled_peaks(amplitude / base_peak); };
  auto efficiency = [&](double amplitude) {
    return program_efficiency(protocol_program(protocol, at_amplitude(amplitude), system), system,
                              options.propagation);
  };

  const double lo = search.lower_amplitude > 0.0 ? search.lower_amplitude : base_peak;
  const double hi = search.upper_factor * omega0;
  const auto found = bisect_threshold([&](double a) { return efficiency(a) >= fidelity_target; }, lo, hi,
                                      search.resolution * omega0);
  PeakResult result;
  result.amplitude = found.value;
  result.iterations = found.iterations;
  result.bracket_width = found.bracket_width;
  result.efficiency = efficiency(found.value);
  result.peak = realised_peak(protocol, at_amplitude(found.value), system);
  return result;
}

double SpeedupReport::argmax_difference_peak() const {
  if (difference.empty()) throw ContractError("empty speedup report");
  const auto it = std::max_element(difference.begin(), difference.end());
  return peaks[static_cast<std::size_t>(it - difference.begin())];
}

SpeedupReport speedup_analysis(std::span<const double> peaks, double fidelity_target, const PulseConfig& base,
                               const SystemConfig& system, const ExperimentOptions& options,
                               const TimeSearchOptions& search) {
  const double t0 = system.pi_time();
  const double base_peak = base.max_peak();
  if (!(base_peak > 0.0)) throw DomainError("base pulses must have a positive peak");

  struct Point {
    double t_ap = 0.0;
    double t_sa = 0.0;
  };
  const auto points = parallel_map(peaks.size(), options.threads, [&](std::size_t i) {
    const double peak = peaks[i];
    auto stirap_ok = [&](double t_units) {
      const auto cfg = base.with_total_time(t_units * t0).scaled_peaks(peak / base_peak);
      return program_efficiency(PulseProgram::gaussian(cfg), system, options.propagation) >= fidelity_target;
    };
    auto stirsap_ok = [&](double t_units) {
      const auto cfg = base.with_total_time(t_units * t0);
      if (stirsap_pulses(cfg, system).shortcut_peak() > peak) return false;
      return program_efficiency(PulseProgram::shortcut(cfg, system), system, options.propagation) >=
             fidelity_target;
    };
    Point p;
    p.t_ap = bisect_threshold(stirap_ok, search.lower, search.upper, search.resolution).value * t0;
    p.t_sa = bisect_threshold(stirsap_ok, search.lower, search.upper, search.resolution).value * t0;
    return p;
  });

  SpeedupReport report;
  report.peaks.assign(peaks.begin(), peaks.end());
  report.fidelity_target = fidelity_target;
  report.pi_time = t0;
  for (const auto& p : points) {
    report.t_ap.push_back(p.t_ap);
    report.t_sa.push_back(p.t_sa);
    report.ratio.push_back(p.t_ap / p.t_sa);
    report.difference.push_back((p.t_ap - p.t_sa) / t0);
  }
  return report;
}

std::string_view to_string(RobustnessAxis axis) {
  switch (axis) {
    case RobustnessAxis::Amplitude:
      return "amplitude";
    case RobustnessAxis::Delay:
      return "delay";
    case RobustnessAxis::Detuning:
      return "detuning";
  }
  return "unknown";
}

RobustnessSpec RobustnessSpec::defaults(RobustnessAxis axis) {
  RobustnessSpec spec;
  spec.axis = axis;
  switch (axis) {
    case RobustnessAxis::Amplitude:
      spec.min = 0.8;
      spec.max = 1.2;
      spec.protocols = {Protocol::ResonantPi, Protocol::Stirsap};
      break;
    case RobustnessAxis::Delay:
      spec.min = 0.8;
      spec.max = 1.2;
      break;
    case RobustnessAxis::Detuning:
      spec.min = -kTwoPi * 40e6;
      spec.max = kTwoPi * 40e6;
      break;
  }
  return spec;
}

std::vector<double> RobustnessSpec::values() const {
  if (samples == 1) return {min};
  return uniform_grid(min, max, samples);
}

namespace {

struct ExecutionPlan {
  PulseProgram program;
  SystemConfig propagation_system;
};

ExecutionPlan plan_point(const RobustnessSpec& spec, Protocol protocol, double value, const PulseConfig& cfg,
                         const SystemConfig& system) {
  switch (spec.axis) {
    case RobustnessAxis::Amplitude:
      return {protocol_program(protocol, cfg, system, {.amplitude_scale = value}), system};
    case RobustnessAxis::Delay: {
      const double executed = cfg.delay * value;
      if (spec.adapt_shapes) {
        PulseConfig adapted = cfg;
        adapted.delay = executed;
        return {protocol_program(protocol, adapted, system), system};
      }
      return {protocol_program(protocol, cfg, system, {.separation_shift = executed - cfg.delay}), system};
    }
    case RobustnessAxis::Detuning: {
      SystemConfig actual = system;
      actual.detuning = system.detuning + value;
      if (!(actual.detuning > 0.0)) throw DomainError("executed detuning must stay positive");
      return {protocol_program(protocol, cfg, system), actual};
    }
  }
  throw ContractError("unknown robustness axis");
}

std::string parameter_name(RobustnessAxis axis) {
  switch (axis) {
    case RobustnessAxis::Amplitude:
      return "epsilon";
    case RobustnessAxis::Delay:
      return "delay_ratio";
    case RobustnessAxis::Detuning:
      return "detuning_offset";
  }
  return "value";
}

}  // namespace

std::vector<SweepResult> robustness_sweep(const RobustnessSpec& spec, const PulseConfig& cfg,
                                          const SystemConfig& system, const ExperimentOptions& options) {
  require_valid(cfg, system);
  if (spec.samples == 0) throw DomainError("robustness sweep needs at least one sample");
  if (spec.min > spec.max) throw DomainError("robustness range is reversed");
  if (spec.adapt_shapes && spec.axis != RobustnessAxis::Delay) {
    throw DomainError("shape adaptation applies to the delay axis only");
  }
  const auto values = spec.values();
  const std::size_t per_protocol = values.size();
  const auto all = parallel_map(per_protocol * spec.protocols.size(), options.threads, [&](std::size_t k) {
    const Protocol protocol = spec.protocols[k / per_protocol];
    const double value = values[k % per_protocol];
    const auto plan = plan_point(spec, protocol, value, cfg, system);
    return program_efficiency(plan.program, plan.propagation_system, options.propagation);
  });

  std::vector<SweepResult> results;
  for (std::size_t p = 0; p < spec.protocols.size(); ++p) {
    SweepResult r;
    r.parameter_name = parameter_name(spec.axis);
    r.parameter_values = values;
    r.protocol = spec.protocols[p];
    if (spec.axis == RobustnessAxis::Delay) r.variant = spec.adapt_shapes ? "adapted-shape" : "fixed-shape";
    r.pulses = cfg;
    r.system = system;
    r.efficiencies.assign(all.begin() + static_cast<std::ptrdiff_t>(p * per_protocol),
                          all.begin() + static_cast<std::ptrdiff_t>((p + 1) * per_protocol));
    results.push_back(std::move(r));
  }
  return results;
}

std::vector<CycleRecord> multi_cycle(const StateVector& initial, std::size_t cycles, const PulseConfig& cfg,
                                     const SystemConfig& system, Protocol protocol,
                                     const ExperimentOptions& options) {
  if (cycles == 0) throw DomainError("at least one cycle is required");
  if (initial.dimension() != 2) throw ContractError("cycles start from a 2-level state");
  const auto program = protocol_program(protocol, cfg, system);
  PropagationOptions quiet = options.propagation;
  quiet.recorded_intervals = 1;
  quiet.record_bloch = false;

  std::vector<CycleRecord> records;
  records.push_back({0, initial.population(0), initial.population(1)});
  StateVector state = initial;
  for (std::size_t c = 1; c <= cycles; ++c) {
    const auto traj = propagate(HamiltonianKind::EffectiveH0, program, system, state, quiet);
    state = traj.final_state();
    records.push_back({c, state.population(0), state.population(1)});
  }
  return records;
}

BlochComparison bloch_comparison(const PulseConfig& cfg, const SystemConfig& system,
                                 const ExperimentOptions& options) {
  require_valid(cfg, system);
  const auto program = PulseProgram::gaussian(cfg);
  const auto psi0 = StateVector::basis(2, 0);
  PropagationOptions opts = options.propagation;
  opts.record_bloch = true;

  const HamiltonianKind kinds[] = {HamiltonianKind::EffectiveH0, HamiltonianKind::TotalH, HamiltonianKind::TildeH};
  auto trajectories = parallel_map(3, options.threads, [&](std::size_t i) {
    return propagate(kinds[i], program, system, psi0, opts);
  });

  BlochComparison out;
  out.h0 = std::move(trajectories[0]);
  out.total = std::move(trajectories[1]);
  out.tilde = std::move(trajectories[2]);
  if (out.h0.times != out.total.times || out.h0.times != out.tilde.times) {
    throw ContractError("Bloch trajectories were recorded on different grids");
  }
  out.times = out.h0.times;
  out.n0 = *out.h0.bloch;
  out.n = *out.total.bloch;
  out.n_tilde = *out.tilde.bloch;

  const auto drive = program.sample(out.times, system, true);
  for (const auto& d : drive) {
    out.b0_hat.push_back(
        effective_field(detail::hamiltonian2(HamiltonianKind::EffectiveH0, d, system, cfg.laser_phase)).direction);
    out.b_hat.push_back(
        effective_field(detail::hamiltonian2(HamiltonianKind::TotalH, d, system, cfg.laser_phase)).direction);
  }
  return out;
}

}  // namespace stirsap
