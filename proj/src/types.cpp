#include "stirsap/types.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "stirsap/errors.hpp"

namespace stirsap {

PulseConfig PulseConfig::from_total_time(double total_time, double peak_pump, double peak_stokes,
                                         double laser_phase) {
  PulseConfig cfg;
  cfg.peak_pump = peak_pump;
  cfg.peak_stokes = peak_stokes;
  cfg.total_time = total_time;
  cfg.width = total_time / 6.0;
  cfg.delay = total_time / 10.0;
  cfg.laser_phase = laser_phase;
  return cfg;
}

PulseConfig PulseConfig::scaled_peaks(double factor) const {
  PulseConfig cfg = *this;
  cfg.peak_pump *= factor;
  cfg.peak_stokes *= factor;
  return cfg;
}

PulseConfig PulseConfig::with_total_time(double total_time) const {
  return from_total_time(total_time, peak_pump, peak_stokes, laser_phase);
}

double SystemConfig::pi_time() const {
  return kTwoPi * detuning / (reference_rabi * reference_rabi);
}

double SystemConfig::pi_time(const PulseConfig& pulses) const {
  return kTwoPi * detuning / (pulses.peak_pump * pulses.peak_stokes);
}

bool SystemConfig::large_detuning(const PulseConfig& pulses) const {
  return detuning >= kLargeDetuningRatio * pulses.max_peak();
}

SystemConfig reference_system() {
  return SystemConfig{.detuning = kTwoPi * 2.5e9, .reference_rabi = kTwoPi * 5e6};
}

PulseConfig reference_pulses(const SystemConfig& system, double total_time) {
  return PulseConfig::from_total_time(total_time, system.reference_rabi, system.reference_rabi);
}

StateVector::StateVector(Eigen::VectorXcd amplitudes) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() != 2 && amplitudes_.size() != 3) {
    throw ContractError("state vector must have dimension 2 or 3, got " +
                        std::to_string(amplitudes_.size()));
  }
  const double norm = amplitudes_.norm();
  if (!(std::abs(norm - 1.0) <= kNormTolerance)) {
    throw ContractError("state vector is not normalized (norm " + std::to_string(norm) + ")");
  }
}

StateVector StateVector::normalized(Eigen::VectorXcd amplitudes) {
  const double norm = amplitudes.norm();
  if (!(norm > 0.0)) {
    throw ContractError("cannot normalize a zero state vector");
  }
  amplitudes /= norm;
  return StateVector(std::move(amplitudes));
}

StateVector StateVector::basis(std::size_t dimension, std::size_t index) {
  if (index >= dimension) {
    throw ContractError("basis index out of range");
  }
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dimension));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return StateVector(std::move(v));
}

std::vector<double> StateVector::populations() const {
  std::vector<double> p(dimension());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = population(i);
  return p;
}

bool HamiltonianSample::is_hermitian(double rel_tol) const {
  if (matrix.rows() != matrix.cols()) return false;
  const double scale = std::max(matrix.cwiseAbs().maxCoeff(), 1e-300);
  return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

double BlochVector::norm() const { return std::sqrt(nx * nx + ny * ny + nz * nz); }

double BlochVector::angle_to(const BlochVector& other) const {
  const double denom = norm() * other.norm();
  if (denom == 0.0) return 0.0;
  // atan2 of |a x b| and a.b stays accurate for nearly parallel vectors.
  const double cx = ny * other.nz - nz * other.ny;
  const double cy = nz * other.nx - nx * other.nz;
  const double cz = nx * other.ny - ny * other.nx;
  return std::atan2(std::sqrt(cx * cx + cy * cy + cz * cz), dot(other));
}

std::string_view to_string(Protocol protocol) {
  switch (protocol) {
    case Protocol::Stirap:
      return "STIRAP";
    case Protocol::Stirsap:
      return "STIRSAP";
    case Protocol::ResonantPi:
      return "ResonantPi";
  }
  return "unknown";
}

std::optional<Protocol> parse_protocol(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "stirap") return Protocol::Stirap;
  if (lower == "stirsap") return Protocol::Stirsap;
  if (lower == "resonant-pi" || lower == "resonantpi") return Protocol::ResonantPi;
  return std::nullopt;
}

double clamp_efficiency(double value) {
  constexpr double kOvershoot = 1e-9;
  if (!(value >= -kOvershoot && value <= 1.0 + kOvershoot)) {
    throw ContractError("efficiency " + std::to_string(value) + " outside [0, 1]");
  }
  return std::clamp(value, 0.0, 1.0);
}

bool ValidationReport::valid() const { return first_failure() == nullptr; }

const ValidationCheck* ValidationReport::first_failure() const {
  for (const auto& c : checks) {
    if (!c.passed) return &c;
  }
  return nullptr;
}

ValidationReport validate_config(const PulseConfig& p, const SystemConfig& s) {
  ValidationReport report;
  auto check = [&](std::string name, bool ok, std::string message) {
    report.checks.push_back({std::move(name), ok, ok ? std::string() : std::move(message)});
  };
  check("peak_pump", p.peak_pump >= 0.0, "pump peak must be non-negative");
  check("peak_stokes", p.peak_stokes >= 0.0, "Stokes peak must be non-negative");
  check("total_time", p.total_time > 0.0, "total time must be positive");
  check("width", p.width > 0.0 && p.width < p.total_time,
        p.width > 0.0 ? "width must be smaller than the total time" : "width must be positive (sigma > 0)");
  check("delay", std::abs(p.delay) < p.total_time / 2.0,
        "delay magnitude must be below half the total time");
  check("detuning", s.detuning > 0.0, "detuning must be positive");
  check("reference_rabi", s.reference_rabi > 0.0, "reference Rabi frequency must be positive");
  check("finite",
        std::isfinite(p.peak_pump) && std::isfinite(p.peak_stokes) && std::isfinite(p.total_time) &&
            std::isfinite(p.width) && std::isfinite(p.delay) && std::isfinite(p.laser_phase) &&
            std::isfinite(s.detuning) && std::isfinite(s.reference_rabi),
        "all parameters must be finite");
  report.large_detuning = s.large_detuning(p);
  return report;
}

void require_valid(const PulseConfig& pulses, const SystemConfig& system) {
  const auto report = validate_config(pulses, system);
  if (const auto* failure = report.first_failure()) {
    throw DomainError("invalid configuration: " + failure->message);
  }
}

}  // namespace stirsap
