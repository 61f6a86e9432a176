#include <cmath>
#include <numbers>

#include "doctest.h"
#include "stirsap/errors.hpp"
#include "stirsap/hamiltonian.hpp"

using namespace stirsap;

namespace {

const Complex kI{0.0, 1.0};

DriveSample sample_with_effective() {
  DriveSample d;
  d.pulses = {0.0, 3.0, 2.0, 0.0, 0.0};
  // Consistent with the pulses for a detuning of 50.
  const auto c = effective_params(3.0, 2.0, 50.0);
  EffectiveParams e;
  e.delta_eff = c.delta_eff;
  e.omega_eff = c.omega_eff;
  e.omega_a = 0.04;
  e.phi = std::atan(e.omega_a / e.omega_eff);
  e.phi_dot = -0.25;
  e.delta_eff_tilde = e.delta_eff + e.phi_dot;
  e.omega_eff_tilde = std::hypot(e.omega_eff, e.omega_a);
  d.effective = e;
  return d;
}

bool close(Complex a, Complex b, double tol = 1e-14) { return std::abs(a - b) <= tol; }

}  // namespace

TEST_SUITE("hamiltonian") {
  TEST_CASE("three-level matrix elements") {
    const SystemConfig sys{.detuning = 50.0, .reference_rabi = 1.0};
    const auto d = sample_with_effective();
    const double phil = 0.3;
    const auto h = build_hamiltonian(HamiltonianKind::Lambda3, d, sys, phil);
    REQUIRE(h.matrix.rows() == 3);
    CHECK(h.is_hermitian());
    CHECK(close(h.matrix(0, 2), 0.5 * 3.0 * std::polar(1.0, phil)));
    CHECK(close(h.matrix(2, 0), 0.5 * 3.0 * std::polar(1.0, -phil)));
    CHECK(close(h.matrix(1, 2), 1.0));
    CHECK(close(h.matrix(2, 2), 50.0));
    CHECK(close(h.matrix(0, 1), 0.0));
    CHECK(close(h.matrix(0, 0), 0.0));
  }

  TEST_CASE("effective two-level matrix elements") {
    const SystemConfig sys{.detuning = 50.0, .reference_rabi = 1.0};
    const auto d = sample_with_effective();
    const auto& e = *d.effective;
    const double phil = 0.3;
    const auto h0 = build_hamiltonian(HamiltonianKind::EffectiveH0, d, sys, phil).matrix;
    CHECK(close(h0(0, 0), -0.5 * e.delta_eff));
    CHECK(close(h0(1, 1), 0.5 * e.delta_eff));
    CHECK(close(h0(0, 1), -0.5 * e.omega_eff * std::polar(1.0, phil)));

    const auto cd = build_hamiltonian(HamiltonianKind::CounterDiabatic, d, sys, phil).matrix;
    CHECK(close(cd(0, 0), 0.0));
    CHECK(close(cd(0, 1), 0.5 * e.omega_a * std::polar(1.0, phil + std::numbers::pi / 2)));

    const auto total = build_hamiltonian(HamiltonianKind::TotalH, d, sys, phil).matrix;
    CHECK(close(total(0, 0), -0.5 * e.delta_eff));
    CHECK(close(total(0, 1), -0.5 * e.omega_eff_tilde * std::polar(1.0, -(e.phi + phil))));

    const auto tilde = build_hamiltonian(HamiltonianKind::TildeH, d, sys, phil).matrix;
    CHECK(close(tilde(0, 0), -0.5 * e.delta_eff_tilde));
    CHECK(close(tilde(0, 1), -0.5 * e.omega_eff_tilde));
    CHECK(close(tilde(1, 0), -0.5 * e.omega_eff_tilde));
  }

  TEST_CASE("H0 plus the counter-diabatic term is the total Hamiltonian at zero laser phase") {
    const SystemConfig sys{.detuning = 50.0, .reference_rabi = 1.0};
    const auto d = sample_with_effective();
    const auto sum = detail::hamiltonian2(HamiltonianKind::EffectiveH0, d, sys, 0.0) +
                     detail::hamiltonian2(HamiltonianKind::CounterDiabatic, d, sys, 0.0);
    const auto total = detail::hamiltonian2(HamiltonianKind::TotalH, d, sys, 0.0);
    CHECK((sum - total).norm() < 1e-14);
  }

  TEST_CASE("kinds that need effective parameters refuse bare samples") {
    const SystemConfig sys{.detuning = 50.0, .reference_rabi = 1.0};
    DriveSample bare;
    bare.pulses = {0.0, 1.0, 1.0, std::nullopt, std::nullopt};
    for (const auto kind : {HamiltonianKind::CounterDiabatic, HamiltonianKind::TotalH, HamiltonianKind::TildeH}) {
      CHECK(needs_effective(kind));
      CHECK_THROWS_AS(build_hamiltonian(kind, bare, sys, 0.0), ContractError);
    }
    CHECK_FALSE(needs_effective(HamiltonianKind::EffectiveH0));
    CHECK(dimension(HamiltonianKind::Lambda3) == 3);
    CHECK(dimension(HamiltonianKind::TildeH) == 2);
  }

  TEST_CASE("dark state is annihilated by the three-level Hamiltonian") {
    const SystemConfig sys{.detuning = 50.0, .reference_rabi = 1.0};
    for (const double phil : {0.0, 0.4, -2.0}) {
      DriveSample d;
      d.pulses = {0.0, 1.7, 0.6, std::nullopt, std::nullopt};
      const auto basis = dressed_basis(d.pulses, phil);
      const auto h = detail::hamiltonian3(d, sys, phil);
      CHECK((h * basis.dark).norm() < 1e-14);
      CHECK(std::abs(basis.dark.dot(basis.bright1)) < 1e-15);
      CHECK(basis.dark.norm() == doctest::Approx(1.0));
      CHECK(basis.bright1.norm() == doctest::Approx(1.0));
      CHECK(basis.mixing_angle == doctest::Approx(std::atan(1.7 / 0.6)));
    }
    CHECK_THROWS_AS(dressed_basis({0.0, 0.0, 0.0, std::nullopt, std::nullopt}, 0.0), DegeneratePulseError);
  }

  TEST_CASE("spin polarization of simple states") {
    const double r = 1.0 / std::sqrt(2.0);
    auto pol = [](Complex a, Complex b) {
      Eigen::VectorXcd v(2);
      v << a, b;
      return spin_polarization(StateVector(v));
    };
    const auto z = pol(1.0, 0.0);
    CHECK(z.nz == 1.0);
    const auto x = pol(r, r);
    CHECK(x.nx == doctest::Approx(1.0));
    CHECK(x.nz == doctest::Approx(0.0));
    const auto y = pol(r, kI * r);
    CHECK(y.ny == doctest::Approx(1.0));
    CHECK_THROWS_AS(spin_polarization(StateVector::basis(3, 0)), ContractError);
  }

  TEST_CASE("effective field of a Pauli-form Hamiltonian") {
    Eigen::Matrix2cd h;
    h << 1.5, Complex(0.5, -1.0), Complex(0.5, 1.0), -1.5;  // B = (1, 2, 3)
    const auto f = effective_field(h);
    CHECK(f.direction_defined);
    CHECK(f.magnitude == doctest::Approx(std::sqrt(14.0)));
    CHECK(f.direction.nx == doctest::Approx(1.0 / std::sqrt(14.0)));
    CHECK(f.direction.ny == doctest::Approx(2.0 / std::sqrt(14.0)));
    CHECK(f.direction.nz == doctest::Approx(3.0 / std::sqrt(14.0)));

    // Lower eigenvector of (1/2) sigma.B points against B.
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> solver(h);
    const auto n = spin_polarization(StateVector::normalized(solver.eigenvectors().col(0)));
    CHECK(n.angle_to(f.direction) == doctest::Approx(std::numbers::pi));

    CHECK_FALSE(effective_field(Eigen::Matrix2cd::Zero()).direction_defined);
    HamiltonianSample three{Eigen::MatrixXcd::Identity(3, 3), 0.0};
    CHECK_THROWS_AS(effective_field(three), ContractError);
  }
}
