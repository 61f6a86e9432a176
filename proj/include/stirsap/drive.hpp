#pragma once

// Executed pulse programs. A program is sampled on whatever uniform grid the
// propagator is using, so the numerically differentiated phase is always
// consistent with the step size in use.

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "stirsap/pulses.hpp"
#include "stirsap/types.hpp"

namespace stirsap {

struct DriveSample {
  PulseSamplePair pulses;
  // Present only for programs that carry analytic derivatives (Gaussian and
  // constant drives). Reshaped pulses are played back as plain amplitudes.
  std::optional<EffectiveParams> effective;
};

// Deviations between the designed and the executed pulses.
struct ExecutionOffsets {
  double amplitude_scale = 1.0;  // both amplitudes multiplied by this factor
  // Pump is played at t - shift and Stokes at t + shift, so the centre
  // separation grows from 2*delay to 2*(delay + shift).
  double separation_shift = 0.0;
};

class PulseProgram {
 public:
  using Sampler = std::function<std::vector<DriveSample>(std::span<const double> times,
                                                         const SystemConfig& system, bool need_effective)>;

  PulseProgram(double duration, double laser_phase, Sampler sampler);

  double duration() const { return duration_; }
  double laser_phase() const { return laser_phase_; }

  // `times` must be uniform when `need_effective` is set.
  std::vector<DriveSample> sample(std::span<const double> times, const SystemConfig& system,
                                  bool need_effective) const;

  // Original Gaussian pair.
  static PulseProgram gaussian(const PulseConfig& cfg, ExecutionOffsets offsets = {});
  // Reshaped shortcut pair designed for `design` (its detuning fixes the
  // shapes). Propagating with a different detuning models a laser that
  // drifted after the shapes were computed.
  static PulseProgram shortcut(const PulseConfig& cfg, const SystemConfig& design,
                               ExecutionOffsets offsets = {});
  // Constant amplitudes for `duration`.
  static PulseProgram constant(double omega_p, double omega_s, double duration, double laser_phase = 0.0);

 private:
  double duration_;
  double laser_phase_;
  Sampler sampler_;
};

// Constant resonant Raman drive whose effective pulse area is `area` rad over
// `duration` (Omega_P = Omega_S, so delta_eff = 0).
PulseProgram resonant_area_program(double area, double duration, const SystemConfig& system);

}  // namespace stirsap
