#pragma once

// Shared domain types. Units: seconds for times, rad/s for every frequency
// (hbar = 1, so Hamiltonian entries are angular frequencies too). Basis order
// is (|1>, |2>, |3>) throughout.

#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace stirsap {

using Complex = std::complex<double>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Gaussian pulse pair. Stokes is centred at T/2 - delay, pump at T/2 + delay.
struct PulseConfig {
  double peak_pump = 0.0;    // rad/s
  double peak_stokes = 0.0;  // rad/s
  double total_time = 0.0;   // s
  double width = 0.0;        // s, Gaussian 1/e half width sigma
  double delay = 0.0;        // s
  double laser_phase = 0.0;  // rad

  // sigma = T/6, delay = T/10.
  static PulseConfig from_total_time(double total_time, double peak_pump, double peak_stokes,
                                     double laser_phase = 0.0);

  double max_peak() const { return peak_pump > peak_stokes ? peak_pump : peak_stokes; }

  // Same shape, both peaks multiplied by `factor`.
  PulseConfig scaled_peaks(double factor) const;
  // Keeps the peaks and phase; rederives width and delay from the new duration.
  PulseConfig with_total_time(double total_time) const;

  friend bool operator==(const PulseConfig&, const PulseConfig&) = default;
};

struct SystemConfig {
  double detuning = 0.0;        // single-photon detuning, rad/s
  double reference_rabi = 0.0;  // Omega_0, rad/s

  // 2 pi Delta / Omega_0^2.
  double pi_time() const;
  // 2 pi Delta / (Omega_P Omega_S) for the peaks of `pulses`.
  double pi_time(const PulseConfig& pulses) const;
  // Delta >= 20 max(Omega_P, Omega_S). Advisory only.
  bool large_detuning(const PulseConfig& pulses) const;

  friend bool operator==(const SystemConfig&, const SystemConfig&) = default;
};

inline constexpr double kLargeDetuningRatio = 20.0;

// Delta = 2 pi x 2.5 GHz, Omega_0 = 2 pi x 5 MHz.
SystemConfig reference_system();
// Omega_P = Omega_S = Omega_0 with sigma and delay derived from `total_time`.
PulseConfig reference_pulses(const SystemConfig& system, double total_time);

// Normalized amplitude vector of dimension 2 or 3.
class StateVector {
 public:
  static constexpr double kNormTolerance = 1e-9;

  // Throws ContractError unless dim is 2 or 3 and the norm is 1 within tolerance.
  explicit StateVector(Eigen::VectorXcd amplitudes);
  // Rescales to unit norm. Throws ContractError for a zero vector.
  static StateVector normalized(Eigen::VectorXcd amplitudes);
  static StateVector basis(std::size_t dimension, std::size_t index);

  std::size_t dimension() const { return static_cast<std::size_t>(amplitudes_.size()); }
  const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }
  Complex operator[](std::size_t i) const { return amplitudes_(static_cast<Eigen::Index>(i)); }
  double population(std::size_t i) const { return std::norm((*this)[i]); }
  std::vector<double> populations() const;

 private:
  Eigen::VectorXcd amplitudes_;
};

struct HamiltonianSample {
  Eigen::MatrixXcd matrix;
  double time = 0.0;

  bool is_hermitian(double rel_tol = 1e-12) const;
};

struct BlochVector {
  double nx = 0.0;
  double ny = 0.0;
  double nz = 0.0;

  double norm() const;
  double dot(const BlochVector& other) const { return nx * other.nx + ny * other.ny + nz * other.nz; }
  // Angle in [0, pi]; both vectors are normalized first.
  double angle_to(const BlochVector& other) const;
};

struct PropagationDiagnostics {
  std::size_t steps = 0;          // steps on the accepted level
  int refinements = 0;            // halvings performed after the base level
  double residual = 0.0;          // population change at the last refinement
  double max_norm_deviation = 0;  // max | |psi| - 1 | over all steps
};

struct Trajectory {
  std::vector<double> times;
  std::vector<StateVector> states;
  std::vector<std::vector<double>> populations;
  std::optional<std::vector<BlochVector>> bloch;
  PropagationDiagnostics diagnostics;

  std::size_t size() const { return times.size(); }
  bool empty() const { return times.empty(); }
  const StateVector& final_state() const { return states.back(); }
};

enum class Protocol { Stirap, Stirsap, ResonantPi };

std::string_view to_string(Protocol protocol);
// Accepts "stirap", "stirsap", "resonant-pi" (case-insensitive).
std::optional<Protocol> parse_protocol(std::string_view text);

struct SweepResult {
  std::string parameter_name;
  std::vector<double> parameter_values;
  std::vector<double> efficiencies;
  Protocol protocol = Protocol::Stirsap;
  std::string variant;  // e.g. "fixed-shape", "T=0.0004"
  PulseConfig pulses;
  SystemConfig system;
};

// Clamps tiny numerical overshoot into [0, 1]. Values further than 1e-9
// outside the interval are a bug and raise ContractError.
double clamp_efficiency(double value);

struct ValidationCheck {
  std::string name;
  bool passed = true;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool large_detuning = false;

  bool valid() const;
  // First failing check, if any.
  const ValidationCheck* first_failure() const;
};

ValidationReport validate_config(const PulseConfig& pulses, const SystemConfig& system);

// Throws DomainError carrying the first failure message.
void require_valid(const PulseConfig& pulses, const SystemConfig& system);

}  // namespace stirsap
