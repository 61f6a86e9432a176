#pragma once

#include <optional>
#include <string_view>

#include <Eigen/Dense>

#include "stirsap/drive.hpp"
#include "stirsap/types.hpp"

namespace stirsap {

// Lambda3:         (1/2)[[0, 0, P e^{i phiL}], [0, 0, S], [P e^{-i phiL}, S, 2 Delta]]
// EffectiveH0:    -(1/2)[[d_eff, W_eff e^{i phiL}], [W_eff e^{-i phiL}, -d_eff]]
// CounterDiabatic: (1/2)[[0, W_a e^{i phiA}], [W_a e^{-i phiA}, 0]],  phiA = phiL + pi/2
// TotalH:         -(1/2)[[d_eff, W~ e^{-i gamma}], [W~ e^{i gamma}, -d_eff]],  gamma = phi + phiL
// TildeH:         -(1/2)[[d~_eff, W~], [W~, -d~_eff]]
enum class HamiltonianKind { Lambda3, EffectiveH0, CounterDiabatic, TotalH, TildeH };

std::string_view to_string(HamiltonianKind kind);
std::size_t dimension(HamiltonianKind kind);
// Whether the kind needs EffectiveParams (Omega_a, phi, phi_dot).
bool needs_effective(HamiltonianKind kind);

HamiltonianSample build_hamiltonian(HamiltonianKind kind, const DriveSample& drive, const SystemConfig& system,
                                    double laser_phase);

namespace detail {
// Fixed-size builders used by the propagator. Throw ContractError when the
// sample lacks what the kind needs.
Eigen::Matrix2cd hamiltonian2(HamiltonianKind kind, const DriveSample& drive, const SystemConfig& system,
                              double laser_phase);
Eigen::Matrix3cd hamiltonian3(const DriveSample& drive, const SystemConfig& system, double laser_phase);
}  // namespace detail

struct DressedBasis {
  Eigen::Vector3cd dark;
  Eigen::Vector3cd bright1;
  Eigen::Vector3cd bright2;
  double mixing_angle = 0.0;  // atan(Omega_P / Omega_S)
};

// Throws DegeneratePulseError when both pulses vanish.
DressedBasis dressed_basis(const PulseSamplePair& pulses, double laser_phase);

// (<sigma_x>, <sigma_y>, <sigma_z>). Throws ContractError for a 3-level state.
BlochVector spin_polarization(const StateVector& state);

struct EffectiveField {
  BlochVector direction;  // unit vector, zero when undefined
  double magnitude = 0.0;
  bool direction_defined = false;
};

// H = (1/2) sigma . B for a 2x2 Hermitian H.
EffectiveField effective_field(const HamiltonianSample& hamiltonian);
EffectiveField effective_field(const Eigen::Matrix2cd& hamiltonian);

}  // namespace stirsap
