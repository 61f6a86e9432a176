#include "stirsap/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

#include "stirsap/errors.hpp"

namespace stirsap {

Eigen::Matrix2cd unitary_step(const Eigen::Matrix2cd& h, double dt) {
  // H = a0 I + bx sx + by sy + bz sz
  const double a0 = 0.5 * (h(0, 0).real() + h(1, 1).real());
  const double bz = 0.5 * (h(0, 0).real() - h(1, 1).real());
  const Complex off = 0.5 * (h(0, 1) + std::conj(h(1, 0)));
  const double bx = off.real();
  const double by = -off.imag();
  const double m = std::sqrt(bx * bx + by * by + bz * bz);
  const double c = std::cos(m * dt);
  // sin(m dt)/m -> dt as m -> 0
  const double s = m * dt > 1e-8 ? std::sin(m * dt) / m : dt * (1.0 - (m * dt) * (m * dt) / 6.0);
  const Complex i{0.0, 1.0};
  Eigen::Matrix2cd u;
  u(0, 0) = c - i * s * bz;
  u(1, 1) = c + i * s * bz;
  u(0, 1) = -i * s * Complex(bx, -by);
  u(1, 0) = -i * s * Complex(bx, by);
  return std::polar(1.0, -a0 * dt) * u;
}

Eigen::Matrix3cd unitary_step(const Eigen::Matrix3cd& h, double dt) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> solver(h);
  const auto& v = solver.eigenvectors();
  Eigen::Vector3cd phases;
  for (int k = 0; k < 3; ++k) phases(k) = std::polar(1.0, -solver.eigenvalues()(k) * dt);
  return v * phases.asDiagonal() * v.adjoint();
}

namespace {

struct LevelResult {
  std::vector<double> times;
  std::vector<Eigen::VectorXcd> states;
  Eigen::VectorXcd final_state;
  double max_norm_deviation = 0.0;
};

template <int Dim>
LevelResult run_level(std::span<const HamiltonianKind> terms, const PulseProgram& program,
                      const SystemConfig& system, const Eigen::VectorXcd& psi0, std::size_t steps,
                      std::size_t recorded_intervals) {
  using Matrix = Eigen::Matrix<Complex, Dim, Dim>;
  using Vector = Eigen::Matrix<Complex, Dim, 1>;
  const double duration = program.duration();
  const double dt = duration / static_cast<double>(steps);
  const bool effective = std::any_of(terms.begin(), terms.end(), needs_effective);

  std::vector<double> midpoints(steps);
  for (std::size_t k = 0; k < steps; ++k) {
    midpoints[k] = duration * ((static_cast<double>(k) + 0.5) / static_cast<double>(steps));
  }
  const auto drive = program.sample(midpoints, system, effective);

  const std::size_t intervals = std::min(recorded_intervals, steps);
  const std::size_t stride = std::max<std::size_t>(1, steps / std::max<std::size_t>(1, intervals));

  LevelResult out;
  Vector psi = psi0;
  auto record = [&](std::size_t k) {
    out.times.push_back(duration * (static_cast<double>(k) / static_cast<double>(steps)));
    out.states.emplace_back(psi);
  };
  record(0);
  for (std::size_t k = 0; k < steps; ++k) {
    Matrix h = Matrix::Zero();
    for (const auto kind : terms) {
      if constexpr (Dim == 3) {
        h += detail::hamiltonian3(drive[k], system, program.laser_phase());
      } else {
        h += detail::hamiltonian2(kind, drive[k], system, program.laser_phase());
      }
    }
    psi = unitary_step(h, dt) * psi;
    out.max_norm_deviation = std::max(out.max_norm_deviation, std::abs(psi.norm() - 1.0));
    if ((k + 1) % stride == 0 || k + 1 == steps) record(k + 1);
  }
  out.final_state = psi;
  return out;
}

double population_change(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::abs(std::norm(a(i)) - std::norm(b(i))));
  }
  return worst;
}

}  // namespace

Trajectory propagate(std::span<const HamiltonianKind> terms, const PulseProgram& program,
                     const SystemConfig& system, const StateVector& psi0, const PropagationOptions& options) {
  if (terms.empty()) throw ContractError("propagation needs at least one Hamiltonian term");
  const std::size_t dim = dimension(terms.front());
  for (const auto kind : terms) {
    if (dimension(kind) != dim) throw ContractError("Hamiltonian terms differ in dimension");
  }
  if (psi0.dimension() != dim) {
    throw ContractError("initial state dimension " + std::to_string(psi0.dimension()) + " does not match " +
                        std::string(to_string(terms.front())));
  }
  if (dim == 3 && terms.size() != 1) throw ContractError("Lambda3 cannot be combined with other terms");
  if (options.base_steps == 0) throw ContractError("base_steps must be positive");

  auto run = [&](std::size_t steps) {
    return dim == 2 ? run_level<2>(terms, program, system, psi0.amplitudes(), steps, options.recorded_intervals)
                    : run_level<3>(terms, program, system, psi0.amplitudes(), steps, options.recorded_intervals);
  };

  std::size_t steps = options.base_steps;
  LevelResult previous = run(steps);
  double residual = 0.0;
  double norm_deviation = previous.max_norm_deviation;
  for (int level = 1; level <= options.max_refinements; ++level) {
    steps *= 2;
    LevelResult current = run(steps);
    residual = population_change(current.final_state, previous.final_state);
    norm_deviation = std::max(norm_deviation, current.max_norm_deviation);
    previous = std::move(current);
    if (residual < options.population_tolerance) {
      if (norm_deviation >= StateVector::kNormTolerance) {
        throw IntegrationError("propagation lost unitarity", norm_deviation);
      }
      Trajectory traj;
      traj.times = std::move(previous.times);
      traj.states.reserve(previous.states.size());
      for (auto& s : previous.states) traj.states.emplace_back(std::move(s));
      traj.populations.reserve(traj.states.size());
      for (const auto& s : traj.states) traj.populations.push_back(s.populations());
      if (dim == 2 && options.record_bloch) {
        std::vector<BlochVector> bloch;
        bloch.reserve(traj.states.size());
        for (const auto& s : traj.states) bloch.push_back(spin_polarization(s));
        traj.bloch = std::move(bloch);
      }
      traj.diagnostics = {.steps = steps, .refinements = level, .residual = residual,
                          .max_norm_deviation = norm_deviation};
      return traj;
    }
  }
  throw IntegrationError("propagation did not converge after " + std::to_string(options.max_refinements) +
                             " refinements (residual " + std::to_string(residual) + ")",
                         residual);
}

Trajectory propagate(HamiltonianKind kind, const PulseProgram& program, const SystemConfig& system,
                     const StateVector& psi0, const PropagationOptions& options) {
  const HamiltonianKind terms[] = {kind};
  return propagate(std::span<const HamiltonianKind>(terms), program, system, psi0, options);
}

Trajectory propagate(std::initializer_list<HamiltonianKind> terms, const PulseProgram& program,
                     const SystemConfig& system, const StateVector& psi0, const PropagationOptions& options) {
  return propagate(std::span<const HamiltonianKind>(terms.begin(), terms.size()), program, system, psi0, options);
}

Trajectory gauge_transform(const Trajectory& trajectory, std::span<const double> times,
                           std::span<const double> phi, double laser_phase) {
  if (times.size() != trajectory.size() || phi.size() != trajectory.size()) {
    throw ContractError("gauge phase grid does not match the trajectory");
  }
  const double scale = trajectory.empty() ? 1.0 : std::max(1e-300, std::abs(trajectory.times.back()));
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (std::abs(times[i] - trajectory.times[i]) > 1e-12 * scale) {
      throw ContractError("gauge phase grid does not match the trajectory");
    }
  }
  Trajectory out;
  out.times = trajectory.times;
  out.diagnostics = trajectory.diagnostics;
  out.states.reserve(trajectory.size());
  for (std::size_t i = 0; i < trajectory.size(); ++i) {
    const auto& s = trajectory.states[i];
    if (s.dimension() != 2) throw ContractError("gauge transform acts on 2-level trajectories");
    const double gamma = phi[i] + laser_phase;
    Eigen::VectorXcd v = s.amplitudes();
    v(0) *= std::polar(1.0, -gamma / 2.0);
    v(1) *= std::polar(1.0, gamma / 2.0);
    out.states.emplace_back(std::move(v));
  }
  out.populations.reserve(out.states.size());
  for (const auto& s : out.states) out.populations.push_back(s.populations());
  if (trajectory.bloch) {
    std::vector<BlochVector> bloch;
    for (const auto& s : out.states) bloch.push_back(spin_polarization(s));
    out.bloch = std::move(bloch);
  }
  return out;
}

double transfer_efficiency(const Trajectory& trajectory, std::size_t target) {
  if (trajectory.empty()) throw ContractError("empty trajectory");
  const auto& final = trajectory.final_state();
  if (target >= final.dimension()) throw ContractError("target basis index out of range");
  return clamp_efficiency(final.population(target));
}

}  // namespace stirsap
