#pragma once

// Pulse synthesis: Gaussian STIRAP pair, counter-diabatic auxiliary Rabi
// frequency, and the reshaped shortcut (STIRSAP) pair that absorbs the
// counter-diabatic term into the two Raman amplitudes.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "stirsap/types.hpp"

namespace stirsap {

struct PulseSamplePair {
  double t = 0.0;
  double omega_p = 0.0;
  double omega_s = 0.0;
  std::optional<double> d_omega_p;
  std::optional<double> d_omega_s;
};

struct EffectiveParams {
  double delta_eff = 0.0;
  double omega_eff = 0.0;
  double omega_a = 0.0;
  double phi = 0.0;
  double phi_dot = 0.0;
  double delta_eff_tilde = 0.0;  // delta_eff + phi_dot
  double omega_eff_tilde = 0.0;  // hypot(omega_eff, omega_a)

  // Phase of the total Hamiltonian's coupling, phi + laser phase.
  double gamma(double laser_phase) const { return phi + laser_phase; }
};

// The auxiliary field's phase is locked a quarter period ahead of the lasers.
inline double auxiliary_phase(double laser_phase) { return laser_phase + kTwoPi / 4.0; }

// Gaussian pair with analytic first derivatives. Throws DomainError for t
// outside [0, T].
PulseSamplePair gaussian_pair(const PulseConfig& cfg, double t);

namespace detail {
// Same formula without the range check; the Gaussians are defined everywhere.
PulseSamplePair gaussian_pair_unchecked(const PulseConfig& cfg, double t);
}  // namespace detail

// 2 (dP S - P dS) / (P^2 + S^2). Missing derivatives count as zero. Sign is
// kept. Throws DegeneratePulseError when both pulses vanish.
double counter_diabatic_rabi(const PulseSamplePair& pair);

struct EffectiveCoupling {
  double delta_eff = 0.0;  // (P^2 - S^2) / (4 Delta)
  double omega_eff = 0.0;  // P S / (2 Delta)
};

EffectiveCoupling effective_params(const PulseSamplePair& pair, const SystemConfig& system);
EffectiveCoupling effective_params(double omega_p, double omega_s, double detuning);

// Inverts the effective coupling back to a non-negative Raman pair.
struct RamanPair {
  double omega_p = 0.0;
  double omega_s = 0.0;
};
RamanPair raman_pair_from_effective(double delta_eff, double omega_eff, double detuning);

struct PhaseProfile {
  std::vector<double> phi;
  std::vector<double> phi_dot;
  // Samples where the step-h and step-2h derivative estimates differ by more
  // than kRichardsonTolerance (relative).
  std::vector<std::size_t> flagged;
};

inline constexpr double kRichardsonTolerance = 1e-4;

// phi = atan(omega_a / omega_eff) and its time derivative by five-point
// differences on a uniform grid (one-sided five-point stencils at the ends).
// Throws ContractError for a non-uniform or too short grid and
// SingularityError when omega_eff vanishes at an interior sample.
PhaseProfile phi_and_derivative(std::span<const double> times, std::span<const double> omega_a,
                                std::span<const double> omega_eff);

struct ShortcutSample {
  double t = 0.0;
  double omega_p = 0.0;  // original Gaussian pair
  double omega_s = 0.0;
  EffectiveParams effective;
  double omega_p_tilde = 0.0;  // reshaped pair
  double omega_s_tilde = 0.0;
};

struct PulseTable {
  std::vector<ShortcutSample> rows;
  std::vector<std::size_t> flagged;

  // max over t of max(omega_p_tilde, omega_s_tilde).
  double shortcut_peak() const;
  // max over t of max(omega_p, omega_s).
  double original_peak() const;
};

inline constexpr std::size_t kDefaultGridSamples = 4096;
inline constexpr double kMinSamplesPerDuration = 1000.0;

// Uniform grid of `samples` points including both ends.
std::vector<double> uniform_grid(double start, double stop, std::size_t samples);

// Reshaped pulses on `times` (uniform, at least min_samples_per_duration per
// T). Samples outside [0, T] use the Gaussian tails.
PulseTable stirsap_pulses(const PulseConfig& cfg, const SystemConfig& system,
                          std::span<const double> times,
                          double min_samples_per_duration = kMinSamplesPerDuration);
// Same on the default grid over [0, T].
PulseTable stirsap_pulses(const PulseConfig& cfg, const SystemConfig& system,
                          std::size_t samples = kDefaultGridSamples);

}  // namespace stirsap
