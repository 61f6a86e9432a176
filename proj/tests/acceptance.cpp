// Acceptance checks. One PASS/FAIL line per criterion; the exit status is
// non-zero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "stirsap/config.hpp"
#include "stirsap/experiments.hpp"
#include "stirsap/hamiltonian.hpp"

using namespace stirsap;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

const SystemConfig kSys = reference_system();
const PulseConfig kBase = reference_pulses(kSys, 0.4e-3);

std::string fmt(double v, int digits = 6) {
  std::ostringstream ss;
  ss.precision(digits);
  ss << v;
  return ss.str();
}

double p2(Protocol protocol, const PulseConfig& cfg, const SystemConfig& sys = kSys) {
  return transfer_efficiency(run_dynamics(protocol, cfg, sys), 1);
}

Outcome stirap_failure() {
  const double p = p2(Protocol::Stirap, kBase);
  return {std::abs(p - 0.36) <= 0.02, "P2 = " + fmt(p) + ", want 0.36 +- 0.02"};
}

Outcome stirsap_success() {
  const double p = p2(Protocol::Stirsap, kBase);
  return {p >= 0.999, "P2 = " + fmt(p, 9) + ", want >= 0.999"};
}

Outcome flat_curve() {
  const std::vector<double> multiples{2, 4, 8, 16, 25};
  std::vector<double> times;
  for (double m : multiples) times.push_back(m * kSys.pi_time());
  const auto sa = efficiency_vs_time(Protocol::Stirsap, times, kBase, kSys);
  const double ap25 = p2(Protocol::Stirap, kBase.with_total_time(25 * kSys.pi_time()));
  const double worst = *std::min_element(sa.efficiencies.begin(), sa.efficiencies.end());
  return {worst >= 0.999 && ap25 >= 0.99,
          "min STIRSAP = " + fmt(worst, 9) + " (>= 0.999), STIRAP at 25 T0 = " + fmt(ap25) + " (>= 0.99)"};
}

Outcome peak_requirement() {
  const double omega0 = kSys.reference_rabi;
  const std::vector<double> multiples{2, 4, 8, 16, 25};
  double at4 = 0.0;
  bool below = true;
  std::string pairs;
  for (double m : multiples) {
    const auto sa = required_peak(Protocol::Stirsap, m * kSys.pi_time(), kDefaultFidelityTarget, kBase, kSys);
    const auto ap = required_peak(Protocol::Stirap, m * kSys.pi_time(), kDefaultFidelityTarget, kBase, kSys);
    if (m == 4) at4 = sa.peak / omega0;
    below = below && sa.peak < ap.peak;
    pairs += " " + fmt(m) + "T0:" + fmt(sa.peak / omega0, 4) + "<" + fmt(ap.peak / omega0, 4);
  }
  return {std::abs(at4 - 1.14) <= 0.05 && below,
          "STIRSAP peak at 4 T0 = " + fmt(at4, 4) + " Omega0 (want 1.14 +- 0.05);" + pairs};
}

Outcome speedup_plateau() {
  const auto grid = parse_config("").options.peak_grid();
  std::vector<double> peaks;
  for (double f : grid) peaks.push_back(f * kSys.reference_rabi);
  const auto report = speedup_analysis(peaks, kDefaultFidelityTarget, kBase, kSys);
  double lo = 1e300, hi = -1e300;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] >= 2.0 - 1e-9 && grid[i] <= 4.0 + 1e-9) {
      lo = std::min(lo, report.ratio[i]);
      hi = std::max(hi, report.ratio[i]);
    }
  }
  const double argmax = report.argmax_difference_peak() / kSys.reference_rabi;
  const bool ok = lo >= 5.3 && hi <= 5.9 && std::abs(argmax - 1.14) <= 0.05;
  return {ok, "ratio on [2, 4] Omega0 in [" + fmt(lo, 4) + ", " + fmt(hi, 4) + "] (want 5.6 +- 0.3), argmax = " +
                  fmt(argmax, 4) + " Omega0 (want 1.14 +- 0.05)"};
}

Outcome amplitude_robustness() {
  RobustnessSpec spec = RobustnessSpec::defaults(RobustnessAxis::Amplitude);
  spec.min = 0.95;
  spec.max = 1.05;
  spec.samples = 21;
  spec.protocols = {Protocol::Stirsap};
  const auto sa = robustness_sweep(spec, kBase, kSys).front();
  const double worst = *std::min_element(sa.efficiencies.begin(), sa.efficiencies.end());

  spec = RobustnessSpec::defaults(RobustnessAxis::Amplitude);
  spec.samples = 9;
  spec.protocols = {Protocol::ResonantPi};
  const auto pi = robustness_sweep(spec, kBase, kSys).front();
  double err = 0.0;
  for (std::size_t i = 0; i < pi.parameter_values.size(); ++i) {
    const double eps = pi.parameter_values[i];
    err = std::max(err, std::abs(pi.efficiencies[i] - std::pow(std::sin(eps * std::numbers::pi / 2), 2)));
  }
  return {worst >= 0.98 && err <= 1e-6,
          "min STIRSAP on eps in [0.95, 1.05] = " + fmt(worst) + " (>= 0.98), resonant error = " + fmt(err, 3) +
              " (<= 1e-6)"};
}

Outcome delay_robustness() {
  RobustnessSpec spec = RobustnessSpec::defaults(RobustnessAxis::Delay);
  const auto fixed = robustness_sweep(spec, kBase, kSys).front();
  spec.adapt_shapes = true;
  const auto adapted = robustness_sweep(spec, kBase, kSys).front();
  const double fmin = *std::min_element(fixed.efficiencies.begin(), fixed.efficiencies.end());
  const double amin = *std::min_element(adapted.efficiencies.begin(), adapted.efficiencies.end());
  return {fmin >= 0.88 && fmin <= 0.93 && amin >= 0.999,
          "fixed-shape min = " + fmt(fmin) + " (in [0.88, 0.93]), adapted-shape min = " + fmt(amin, 9) +
              " (>= 0.999)"};
}

Outcome gauge_equivalence() {
  const auto c = bloch_comparison(kBase, kSys);
  double pop = 0.0, n = 0.0, nt = 0.0, n0 = 0.0;
  for (std::size_t i = 0; i < c.times.size(); ++i) {
    pop = std::max(pop, std::abs(c.total.populations[i][1] - c.tilde.populations[i][1]));
    n = std::max(n, c.n[i].angle_to(c.b0_hat[i]));
    nt = std::max(nt, c.n_tilde[i].angle_to(c.b0_hat[i]));
    n0 = std::max(n0, c.n0[i].angle_to(c.b0_hat[i]));
  }
  return {pop <= 1e-6 && n <= 0.02 && nt <= 0.02 && n0 > 0.3,
          "|P(H) - P(H~)| = " + fmt(pop, 3) + " (<= 1e-6), max angle to B0: <n> " + fmt(n, 4) + ", <n~> " +
              fmt(nt, 4) + " (<= 0.02), <n0> " + fmt(n0, 4) + " (> 0.3)"};
}

Outcome three_level() {
  // Common frequency scale 1e-3 keeps Delta/Omega0 = 500.
  const double k = 1e-3;
  const SystemConfig sys{.detuning = kSys.detuning * k, .reference_rabi = kSys.reference_rabi * k};
  const auto cfg = reference_pulses(sys, 4 * sys.pi_time());
  double diff = 0.0, p3 = 0.0;
  for (const auto protocol : {Protocol::Stirap, Protocol::Stirsap}) {
    const auto program = protocol_program(protocol, cfg, sys);
    const auto three = propagate(HamiltonianKind::Lambda3, program, sys, StateVector::basis(3, 0));
    const auto two = propagate(HamiltonianKind::EffectiveH0, program, sys, StateVector::basis(2, 0));
    for (std::size_t lvl = 0; lvl < 2; ++lvl) {
      diff = std::max(diff, std::abs(three.final_state().population(lvl) - two.final_state().population(lvl)));
    }
    for (const auto& p : three.populations) p3 = std::max(p3, p[2]);
  }
  return {diff <= 5e-3 && p3 <= 1e-4,
          "max population difference = " + fmt(diff, 3) + " (<= 5e-3), max excited = " + fmt(p3, 3) + " (<= 1e-4)"};
}

Outcome multi_cycle_check() {
  const auto from_ground = multi_cycle(StateVector::basis(2, 0), 5, kBase, kSys);
  Eigen::VectorXcd amps(2);
  amps << std::sqrt(0.3), std::sqrt(0.7);
  const auto mixed = multi_cycle(StateVector(amps), 5, kBase, kSys);
  const double p2_final = from_ground.back().p2;
  const double p1_final = mixed.back().p1;
  return {p2_final >= 0.995 && std::abs(p1_final - 0.7) <= 0.01,
          "P2 after 5 cycles from |1> = " + fmt(p2_final, 9) + " (>= 0.995), P1 after 5 cycles from the superposition = " +
              fmt(p1_final) + " (0.7 +- 0.01)"};
}

Outcome analytic_oracles() {
  // Constant resonant pi pulse.
  const auto pi_traj = propagate(HamiltonianKind::EffectiveH0, resonant_area_program(std::numbers::pi, kSys.pi_time(), kSys),
                                 kSys, StateVector::basis(2, 0));
  const double inversion = std::abs(1.0 - transfer_efficiency(pi_traj, 1));

  // Omega_a = 2 d(theta)/dt with theta = atan(P/S).
  const double h = kBase.total_time * 1e-5;
  double ident = 0.0;
  for (int i = 1; i < 20; ++i) {
    const double t = kBase.total_time * i / 20.0;
    auto theta = [&](double s) {
      const auto p = gaussian_pair(kBase, s);
      return std::atan2(p.omega_p, p.omega_s);
    };
    const double fd = (theta(t + h) - theta(t - h)) / h;
    ident = std::max(ident, std::abs(counter_diabatic_rabi(gaussian_pair(kBase, t)) - fd) / std::abs(fd));
  }

  // Effective coupling -> Raman pair -> effective coupling.
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.01, 4.0);
  double trip = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double p = u(rng) * kSys.reference_rabi, s = u(rng) * kSys.reference_rabi;
    const auto e = effective_params(p, s, kSys.detuning);
    const auto back = raman_pair_from_effective(e.delta_eff, e.omega_eff, kSys.detuning);
    trip = std::max({trip, std::abs(back.omega_p - p) / p, std::abs(back.omega_s - s) / s});
  }

  // Unitarity on every recorded trajectory kind.
  double norm = pi_traj.diagnostics.max_norm_deviation;
  for (const auto protocol : {Protocol::Stirap, Protocol::Stirsap, Protocol::ResonantPi}) {
    norm = std::max(norm, run_dynamics(protocol, kBase, kSys).diagnostics.max_norm_deviation);
  }
  const auto c = bloch_comparison(kBase, kSys);
  norm = std::max({norm, c.h0.diagnostics.max_norm_deviation, c.total.diagnostics.max_norm_deviation,
                   c.tilde.diagnostics.max_norm_deviation});
  norm = std::max(norm, propagate(HamiltonianKind::Lambda3, PulseProgram::shortcut(kBase, kSys), kSys,
                                  StateVector::basis(3, 0))
                            .diagnostics.max_norm_deviation);

  return {inversion <= 1e-8 && ident <= 1e-5 && trip <= 1e-9 && norm <= 1e-9,
          "pi inversion error = " + fmt(inversion, 3) + " (<= 1e-8), Omega_a identity = " + fmt(ident, 3) +
              " (<= 1e-5), round trip = " + fmt(trip, 3) + " (<= 1e-9), norm drift = " + fmt(norm, 3) +
              " (<= 1e-9)"};
}

struct Criterion {
  int id;
  const char* name;
  double time_limit_s;  // 0 = none
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "STIRAP failure point at T = 0.4 ms", 5.0, stirap_failure},
      {2, "STIRSAP success at T = 0.4 ms", 5.0, stirsap_success},
      {3, "flat STIRSAP efficiency over operation time", 0.0, flat_curve},
      {4, "peak requirement at fidelity 0.994", 0.0, peak_requirement},
      {5, "speedup plateau", 600.0, speedup_plateau},
      {6, "amplitude robustness", 0.0, amplitude_robustness},
      {7, "delay robustness", 0.0, delay_robustness},
      {8, "gauge and shortcut equivalence", 0.0, gauge_equivalence},
      {9, "three-level consistency", 0.0, three_level},
      {10, "repeated cycles", 0.0, multi_cycle_check},
      {11, "analytic oracles", 0.0, analytic_oracles},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_limit_s > 0.0 && secs >= c.time_limit_s) {
      o.passed = false;
      o.detail += "; runtime over " + fmt(c.time_limit_s) + " s";
    }
    if (!o.passed) ++failures;
    std::printf("[%s] %2d %s: %s (%.2f s)\n", o.passed ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
