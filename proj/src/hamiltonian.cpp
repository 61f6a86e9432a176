#include "stirsap/hamiltonian.hpp"

#include <cmath>

#include "stirsap/errors.hpp"

namespace stirsap {

namespace {

constexpr Complex kI{0.0, 1.0};

Complex phase(double angle) { return std::polar(1.0, angle); }

const EffectiveParams& require_effective(HamiltonianKind kind, const DriveSample& drive) {
  if (!drive.effective) {
    throw ContractError(std::string(to_string(kind)) +
                        " needs the auxiliary Rabi frequency and phase derivative of the drive");
  }
  return *drive.effective;
}

}  // namespace

std::string_view to_string(HamiltonianKind kind) {
  switch (kind) {
    case HamiltonianKind::Lambda3:
      return "Lambda3";
    case HamiltonianKind::EffectiveH0:
      return "EffectiveH0";
    case HamiltonianKind::CounterDiabatic:
      return "CounterDiabatic";
    case HamiltonianKind::TotalH:
      return "TotalH";
    case HamiltonianKind::TildeH:
      return "TildeH";
  }
  return "unknown";
}

std::size_t dimension(HamiltonianKind kind) { return kind == HamiltonianKind::Lambda3 ? 3 : 2; }

bool needs_effective(HamiltonianKind kind) {
  return kind == HamiltonianKind::CounterDiabatic || kind == HamiltonianKind::TotalH ||
         kind == HamiltonianKind::TildeH;
}

namespace detail {

Eigen::Matrix2cd hamiltonian2(HamiltonianKind kind, const DriveSample& drive, const SystemConfig& system,
                              double laser_phase) {
  Eigen::Matrix2cd h;
  switch (kind) {
    case HamiltonianKind::EffectiveH0: {
      const auto c = effective_params(drive.pulses, system);
      h << c.delta_eff, c.omega_eff * phase(laser_phase), c.omega_eff * phase(-laser_phase), -c.delta_eff;
      return -0.5 * h;
    }
    case HamiltonianKind::CounterDiabatic: {
      const auto& e = require_effective(kind, drive);
      const double phi_a = auxiliary_phase(laser_phase);
      h << 0.0, e.omega_a * phase(phi_a), e.omega_a * phase(-phi_a), 0.0;
      return 0.5 * h;
    }
    case HamiltonianKind::TotalH: {
      const auto& e = require_effective(kind, drive);
      const double gamma = e.gamma(laser_phase);
      h << e.delta_eff, e.omega_eff_tilde * phase(-gamma), e.omega_eff_tilde * phase(gamma), -e.delta_eff;
      return -0.5 * h;
    }
    case HamiltonianKind::TildeH: {
      const auto& e = require_effective(kind, drive);
      h << e.delta_eff_tilde, e.omega_eff_tilde, e.omega_eff_tilde, -e.delta_eff_tilde;
      return -0.5 * h;
    }
    case HamiltonianKind::Lambda3:
      break;
  }
  throw ContractError("Lambda3 is a 3-level Hamiltonian");
}

Eigen::Matrix3cd hamiltonian3(const DriveSample& drive, const SystemConfig& system, double laser_phase) {
  const double p = drive.pulses.omega_p;
  const double s = drive.pulses.omega_s;
  Eigen::Matrix3cd h;
  h << 0.0, 0.0, p * phase(laser_phase),  //
      0.0, 0.0, s,                          //
      p * phase(-laser_phase), s, 2.0 * system.detuning;
  return 0.5 * h;
}

}  // namespace detail

HamiltonianSample build_hamiltonian(HamiltonianKind kind, const DriveSample& drive, const SystemConfig& system,
                                    double laser_phase) {
  HamiltonianSample sample;
  sample.time = drive.pulses.t;
  if (kind == HamiltonianKind::Lambda3) {
    sample.matrix = detail::hamiltonian3(drive, system, laser_phase);
  } else {
    sample.matrix = detail::hamiltonian2(kind, drive, system, laser_phase);
  }
  return sample;
}

DressedBasis dressed_basis(const PulseSamplePair& pulses, double laser_phase) {
  if (!(pulses.omega_p * pulses.omega_p + pulses.omega_s * pulses.omega_s > 0.0)) {
    throw DegeneratePulseError("dressed basis undefined when both pulses vanish");
  }
  DressedBasis basis;
  basis.mixing_angle = std::atan2(pulses.omega_p, pulses.omega_s);
  const double c = std::cos(basis.mixing_angle);
  const double s = std::sin(basis.mixing_angle);
  basis.dark << c, -s * phase(-laser_phase), 0.0;
  basis.bright1 << s * phase(laser_phase), c, 0.0;
  basis.bright2 << 0.0, 0.0, 1.0;
  return basis;
}

BlochVector spin_polarization(const StateVector& state) {
  if (state.dimension() != 2) {
    throw ContractError("spin polarization is defined for 2-level states only");
  }
  const Complex c1 = state[0];
  const Complex c2 = state[1];
  const Complex coherence = std::conj(c1) * c2;
  return {.nx = 2.0 * coherence.real(), .ny = 2.0 * coherence.imag(), .nz = std::norm(c1) - std::norm(c2)};
}

EffectiveField effective_field(const Eigen::Matrix2cd& h) {
  const Complex bx = h(0, 1) + h(1, 0);
  const Complex by = kI * (h(0, 1) - h(1, 0));
  const Complex bz = h(0, 0) - h(1, 1);
  EffectiveField field;
  const BlochVector b{bx.real(), by.real(), bz.real()};
  field.magnitude = b.norm();
  if (field.magnitude > 0.0) {
    field.direction = {b.nx / field.magnitude, b.ny / field.magnitude, b.nz / field.magnitude};
    field.direction_defined = true;
  }
  return field;
}

EffectiveField effective_field(const HamiltonianSample& hamiltonian) {
  if (hamiltonian.matrix.rows() != 2 || hamiltonian.matrix.cols() != 2) {
    throw ContractError("effective field needs a 2x2 Hamiltonian");
  }
  return effective_field(Eigen::Matrix2cd(hamiltonian.matrix));
}

}  // namespace stirsap
