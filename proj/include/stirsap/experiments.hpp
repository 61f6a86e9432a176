#pragma once

// Numerical campaigns: transfer dynamics, efficiency versus duration,
// fidelity-constrained peak searches, speedup analysis, robustness sweeps,
// repeated cycles and Bloch-sphere comparisons. All campaigns run the
// effective two-level model unless stated otherwise.

#include <cstddef>
#include <span>
#include <vector>

#include "stirsap/drive.hpp"
#include "stirsap/propagator.hpp"
#include "stirsap/types.hpp"

namespace stirsap {

struct ExperimentOptions {
  PropagationOptions propagation;
  unsigned threads = 0;  // worker pool size, 0 = hardware concurrency
};

inline constexpr double kDefaultFidelityTarget = 0.994;

// Program that executes `protocol` for `cfg`. Reshaped pulses are designed
// with `design`. ResonantPi plays a constant resonant drive of area pi over
// the pi time of `design`, scaled by offsets.amplitude_scale.
PulseProgram protocol_program(Protocol protocol, const PulseConfig& cfg, const SystemConfig& design,
                              ExecutionOffsets offsets = {});

// |2> population after running `program` from |1> under the effective
// two-level Hamiltonian with detuning taken from `system`.
double program_efficiency(const PulseProgram& program, const SystemConfig& system,
                          const PropagationOptions& options = {});

// |1>-initialised effective two-level trajectory.
Trajectory run_dynamics(Protocol protocol, const PulseConfig& cfg, const SystemConfig& system,
                        const ExperimentOptions& options = {});

// Efficiency per duration. Width and delay follow each duration (T/6, T/10);
// STIRSAP reshapes its pulses for every duration.
SweepResult efficiency_vs_time(Protocol protocol, std::span<const double> total_times, const PulseConfig& base,
                               const SystemConfig& system, const ExperimentOptions& options = {});

struct PeakSearchOptions {
  double resolution = 1e-3;     // in units of Omega_0
  double upper_factor = 100.0;  // upper bracket in units of Omega_0
  // Smallest original amplitude tried (rad/s). Defaults to the configured
  // peak amplitude of the base pulses.
  double lower_amplitude = 0.0;
};

struct PeakResult {
  double peak = 0.0;       // realised peak: Omega_AP or max_t max(Omega~_P, Omega~_S)
  double amplitude = 0.0;  // original Gaussian amplitude used
  double efficiency = 0.0;
  int iterations = 0;
  double bracket_width = 0.0;  // rad/s
};

// Minimal original amplitude (both pulses scaled together) that reaches the
// fidelity target at `total_time`, found by bisection. Throws SearchError
// when the target is unreachable below upper_factor * Omega_0.
PeakResult required_peak(Protocol protocol, double total_time, double fidelity_target, const PulseConfig& base,
                         const SystemConfig& system, const ExperimentOptions& options = {},
                         const PeakSearchOptions& search = {});

struct TimeSearchOptions {
  double resolution = 1e-3;  // in units of T_0
  double lower = 1e-2;       // bracket in units of T_0
  double upper = 200.0;
};

struct SpeedupReport {
  std::vector<double> peaks;  // rad/s
  std::vector<double> t_ap;   // s
  std::vector<double> t_sa;   // s
  std::vector<double> ratio;
  std::vector<double> difference;  // (T_AP - T_SA) / T_0
  double fidelity_target = kDefaultFidelityTarget;
  double pi_time = 0.0;  // T_0 used for the difference column

  // Peak at which (T_AP - T_SA) is largest.
  double argmax_difference_peak() const;
};

// For each peak value, the shortest durations at which STIRAP (Gaussian
// pulses with that peak) and STIRSAP (pulses reshaped from the configured
// original amplitude whose realised peak does not exceed the value) reach
// the fidelity target.
SpeedupReport speedup_analysis(std::span<const double> peaks, double fidelity_target, const PulseConfig& base,
                               const SystemConfig& system, const ExperimentOptions& options = {},
                               const TimeSearchOptions& search = {});

enum class RobustnessAxis { Amplitude, Delay, Detuning };

std::string_view to_string(RobustnessAxis axis);

struct RobustnessSpec {
  RobustnessAxis axis = RobustnessAxis::Amplitude;
  // Amplitude: scale factor epsilon. Delay: ratio of executed to designed
  // delay. Detuning: offset of the executed detuning from nominal, rad/s.
  double min = 0.8;
  double max = 1.2;
  std::size_t samples = 41;
  std::vector<Protocol> protocols{Protocol::Stirsap};
  bool adapt_shapes = false;  // delay axis only

  // epsilon in [0.8, 1.2]; delay ratio in [0.8, 1.2]; detuning offset
  // within +-2 pi x 40 MHz.
  static RobustnessSpec defaults(RobustnessAxis axis);
  std::vector<double> values() const;
};

// One SweepResult per entry of spec.protocols.
std::vector<SweepResult> robustness_sweep(const RobustnessSpec& spec, const PulseConfig& cfg,
                                          const SystemConfig& system, const ExperimentOptions& options = {});

struct CycleRecord {
  std::size_t cycle = 0;  // 0 is the initial state
  double p1 = 0.0;
  double p2 = 0.0;
};

// Plays the same pulse sequence `cycles` times back to back.
std::vector<CycleRecord> multi_cycle(const StateVector& initial, std::size_t cycles, const PulseConfig& cfg,
                                     const SystemConfig& system, Protocol protocol = Protocol::Stirsap,
                                     const ExperimentOptions& options = {});

struct BlochComparison {
  std::vector<double> times;
  std::vector<BlochVector> n0;       // under EffectiveH0
  std::vector<BlochVector> n;        // under TotalH
  std::vector<BlochVector> n_tilde;  // under TildeH
  std::vector<BlochVector> b0_hat;   // field direction of EffectiveH0
  std::vector<BlochVector> b_hat;    // field direction of TotalH
  Trajectory h0;
  Trajectory total;
  Trajectory tilde;
};

BlochComparison bloch_comparison(const PulseConfig& cfg, const SystemConfig& system,
                                 const ExperimentOptions& options = {});

}  // namespace stirsap
