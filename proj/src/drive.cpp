#include "stirsap/drive.hpp"

#include <cmath>
#include <utility>

#include "stirsap/errors.hpp"

namespace stirsap {

PulseProgram::PulseProgram(double duration, double laser_phase, Sampler sampler)
    : duration_(duration), laser_phase_(laser_phase), sampler_(std::move(sampler)) {
  if (!(duration_ > 0.0)) throw DomainError("pulse program duration must be positive");
}

std::vector<DriveSample> PulseProgram::sample(std::span<const double> times, const SystemConfig& system,
                                              bool need_effective) const {
  return sampler_(times, system, need_effective);
}

namespace {

void fill_effective(std::vector<DriveSample>& samples, std::span<const double> times,
                    const SystemConfig& system) {
  const std::size_t n = samples.size();
  std::vector<double> omega_a(n), omega_eff(n);
  std::vector<EffectiveParams> params(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto coupling = effective_params(samples[i].pulses, system);
    params[i].delta_eff = coupling.delta_eff;
    params[i].omega_eff = coupling.omega_eff;
    params[i].omega_a = counter_diabatic_rabi(samples[i].pulses);
    omega_a[i] = params[i].omega_a;
    omega_eff[i] = coupling.omega_eff;
  }
  const auto phase = phi_and_derivative(times, omega_a, omega_eff);
  for (std::size_t i = 0; i < n; ++i) {
    auto& e = params[i];
    e.phi = phase.phi[i];
    e.phi_dot = phase.phi_dot[i];
    e.delta_eff_tilde = e.delta_eff + e.phi_dot;
    e.omega_eff_tilde = std::hypot(e.omega_eff, e.omega_a);
    samples[i].effective = e;
  }
}

std::vector<double> shifted(std::span<const double> times, double shift) {
  std::vector<double> out(times.begin(), times.end());
  for (auto& t : out) t += shift;
  return out;
}

}  // namespace

PulseProgram PulseProgram::gaussian(const PulseConfig& cfg, ExecutionOffsets offsets) {
  auto sampler = [cfg, offsets](std::span<const double> times, const SystemConfig& system,
                                bool need_effective) {
    std::vector<DriveSample> out(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
      const double t = times[i];
      const auto pump = detail::gaussian_pair_unchecked(cfg, t - offsets.separation_shift);
      const auto stokes = detail::gaussian_pair_unchecked(cfg, t + offsets.separation_shift);
      auto& p = out[i].pulses;
      p.t = t;
      p.omega_p = offsets.amplitude_scale * pump.omega_p;
      p.omega_s = offsets.amplitude_scale * stokes.omega_s;
      p.d_omega_p = offsets.amplitude_scale * *pump.d_omega_p;
      p.d_omega_s = offsets.amplitude_scale * *stokes.d_omega_s;
    }
    if (need_effective) fill_effective(out, times, system);
    return out;
  };
  return PulseProgram(cfg.total_time, cfg.laser_phase, std::move(sampler));
}

PulseProgram PulseProgram::shortcut(const PulseConfig& cfg, const SystemConfig& design,
                                    ExecutionOffsets offsets) {
  require_valid(cfg, design);
  auto sampler = [cfg, design, offsets](std::span<const double> times, const SystemConfig&,
                                        bool need_effective) {
    if (need_effective) {
      throw ContractError("reshaped pulses carry no derivative data; use the Gaussian program");
    }
    // The propagator's grid is a midpoint grid; only its uniform spacing
    // matters for the phase derivative.
    const auto pump_times = shifted(times, -offsets.separation_shift);
    const auto stokes_times = shifted(times, offsets.separation_shift);
    const auto pump_table = stirsap_pulses(cfg, design, pump_times);
    const bool same = offsets.separation_shift == 0.0;
    const auto stokes_table =
        same ? PulseTable{} : stirsap_pulses(cfg, design, stokes_times);
    std::vector<DriveSample> out(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
      auto& p = out[i].pulses;
      p.t = times[i];
      p.omega_p = offsets.amplitude_scale * pump_table.rows[i].omega_p_tilde;
      p.omega_s = offsets.amplitude_scale * (same ? pump_table.rows[i] : stokes_table.rows[i]).omega_s_tilde;
    }
    return out;
  };
  return PulseProgram(cfg.total_time, cfg.laser_phase, std::move(sampler));
}

PulseProgram PulseProgram::constant(double omega_p, double omega_s, double duration, double laser_phase) {
  auto sampler = [omega_p, omega_s](std::span<const double> times, const SystemConfig& system,
                                    bool need_effective) {
    std::vector<DriveSample> out(times.size());
    const auto coupling = effective_params(omega_p, omega_s, system.detuning);
    for (std::size_t i = 0; i < times.size(); ++i) {
      out[i].pulses = {.t = times[i], .omega_p = omega_p, .omega_s = omega_s, .d_omega_p = 0.0, .d_omega_s = 0.0};
      if (need_effective) {
        EffectiveParams e;
        e.delta_eff = coupling.delta_eff;
        e.omega_eff = coupling.omega_eff;
        e.delta_eff_tilde = coupling.delta_eff;
        e.omega_eff_tilde = coupling.omega_eff;
        out[i].effective = e;
      }
    }
    return out;
  };
  return PulseProgram(duration, laser_phase, std::move(sampler));
}

PulseProgram resonant_area_program(double area, double duration, const SystemConfig& system) {
  if (area < 0.0) throw DomainError("pulse area must be non-negative");
  // omega_eff = Omega^2 / (2 Delta) and omega_eff * duration = area.
  const double amplitude = std::sqrt(2.0 * system.detuning * area / duration);
  return PulseProgram::constant(amplitude, amplitude, duration);
}

}  // namespace stirsap
