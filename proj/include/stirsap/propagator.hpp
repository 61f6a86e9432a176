#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>

#include <Eigen/Dense>

#include "stirsap/drive.hpp"
#include "stirsap/hamiltonian.hpp"
#include "stirsap/types.hpp"

namespace stirsap {

struct PropagationOptions {
  std::size_t base_steps = 4096;
  // Accept a level once the final populations moved less than this after a
  // halving of the step.
  double population_tolerance = 1e-8;
  int max_refinements = 20;
  // Recorded trajectory has at most this many intervals (plus the start).
  std::size_t recorded_intervals = 1024;
  bool record_bloch = true;
};

// exp(-i H dt) for Hermitian H. The 2x2 form is the closed-form Pauli
// exponential; the 3x3 form goes through a Hermitian eigendecomposition.
Eigen::Matrix2cd unitary_step(const Eigen::Matrix2cd& hamiltonian, double dt);
Eigen::Matrix3cd unitary_step(const Eigen::Matrix3cd& hamiltonian, double dt);

// Propagates psi0 over [0, program.duration()] under the sum of `terms`
// (all of the same dimension as psi0), each step using the exact exponential
// of the midpoint Hamiltonian. Throws IntegrationError if the final
// populations have not converged after max_refinements halvings.
Trajectory propagate(std::span<const HamiltonianKind> terms, const PulseProgram& program,
                     const SystemConfig& system, const StateVector& psi0, const PropagationOptions& options = {});
Trajectory propagate(HamiltonianKind kind, const PulseProgram& program, const SystemConfig& system,
                     const StateVector& psi0, const PropagationOptions& options = {});
Trajectory propagate(std::initializer_list<HamiltonianKind> terms, const PulseProgram& program,
                     const SystemConfig& system, const StateVector& psi0, const PropagationOptions& options = {});

// Applies U(t) = diag(e^{-i gamma/2}, e^{+i gamma/2}), gamma = phi + laser
// phase, to every state. `times` must match the trajectory's grid.
Trajectory gauge_transform(const Trajectory& trajectory, std::span<const double> times,
                           std::span<const double> phi, double laser_phase);

// Final population of basis state `target` (0-based).
double transfer_efficiency(const Trajectory& trajectory, std::size_t target);

}  // namespace stirsap
