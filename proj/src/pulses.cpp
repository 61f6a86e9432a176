#include "stirsap/pulses.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "stirsap/errors.hpp"

namespace stirsap {

namespace detail {

PulseSamplePair gaussian_pair_unchecked(const PulseConfig& cfg, double t) {
  const double sigma2 = cfg.width * cfg.width;
  const double centre = cfg.total_time / 2.0;
  const double xs = t - centre + cfg.delay;
  const double xp = t - centre - cfg.delay;
  PulseSamplePair pair;
  pair.t = t;
  pair.omega_s = cfg.peak_stokes * std::exp(-xs * xs / sigma2);
  pair.omega_p = cfg.peak_pump * std::exp(-xp * xp / sigma2);
  pair.d_omega_s = -2.0 * xs / sigma2 * pair.omega_s;
  pair.d_omega_p = -2.0 * xp / sigma2 * pair.omega_p;
  return pair;
}

}  // namespace detail

PulseSamplePair gaussian_pair(const PulseConfig& cfg, double t) {
  if (!(t >= 0.0 && t <= cfg.total_time)) {
    std::ostringstream msg;
    msg << "time " << t << " s outside [0, " << cfg.total_time << "] s";
    throw DomainError(msg.str());
  }
  return detail::gaussian_pair_unchecked(cfg, t);
}

double counter_diabatic_rabi(const PulseSamplePair& pair) {
  const double norm2 = pair.omega_p * pair.omega_p + pair.omega_s * pair.omega_s;
  if (!(norm2 > 0.0)) {
    throw DegeneratePulseError("both Raman pulses vanish at t = " + std::to_string(pair.t));
  }
  const double dp = pair.d_omega_p.value_or(0.0);
  const double ds = pair.d_omega_s.value_or(0.0);
  return 2.0 * (dp * pair.omega_s - pair.omega_p * ds) / norm2;
}

EffectiveCoupling effective_params(double omega_p, double omega_s, double detuning) {
  return {.delta_eff = (omega_p * omega_p - omega_s * omega_s) / (4.0 * detuning),
          .omega_eff = omega_p * omega_s / (2.0 * detuning)};
}

EffectiveCoupling effective_params(const PulseSamplePair& pair, const SystemConfig& system) {
  return effective_params(pair.omega_p, pair.omega_s, system.detuning);
}

RamanPair raman_pair_from_effective(double delta_eff, double omega_eff, double detuning) {
  const double r = std::hypot(delta_eff, omega_eff);
  if (r == 0.0) return {};
  // r + |d| is cancellation free; the small root follows from the product
  // (r + |d|)(r - |d|) = omega_eff^2.
  const double big = r + std::abs(delta_eff);
  const double small = omega_eff * omega_eff / big;
  const double plus = delta_eff >= 0.0 ? big : small;   // r + d
  const double minus = delta_eff >= 0.0 ? small : big;  // r - d
  return {.omega_p = std::sqrt(2.0 * detuning * plus), .omega_s = std::sqrt(2.0 * detuning * minus)};
}

namespace {

double grid_step(std::span<const double> times) {
  if (times.size() < 5) {
    throw ContractError("five-point differences need at least 5 samples");
  }
  const double h = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
  if (!(h > 0.0)) throw ContractError("time grid must be strictly increasing");
  const double tol = 1e-9 * h + 1e-12 * std::max(std::abs(times.front()), std::abs(times.back()));
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (std::abs((times[i] - times[i - 1]) - h) > tol) {
      throw ContractError("time grid must be uniform");
    }
  }
  return h;
}

// Five-point derivative of f at i with spacing stride*h.
double five_point(std::span<const double> f, std::size_t i, std::size_t stride, double h) {
  const std::size_t n = f.size();
  const double step = h * static_cast<double>(stride);
  auto at = [&](std::ptrdiff_t offset) {
    return f[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(i) +
                                      offset * static_cast<std::ptrdiff_t>(stride))];
  };
  const std::size_t reach = 2 * stride;
  if (i >= reach && i + reach < n) {
    return (-at(2) + 8.0 * at(1) - 8.0 * at(-1) + at(-2)) / (12.0 * step);
  }
  if (i < stride) {  // first sample: forward
    return (-25.0 * at(0) + 48.0 * at(1) - 36.0 * at(2) + 16.0 * at(3) - 3.0 * at(4)) / (12.0 * step);
  }
  if (i < reach) {  // second sample: shifted stencil
    return (-3.0 * at(-1) - 10.0 * at(0) + 18.0 * at(1) - 6.0 * at(2) + at(3)) / (12.0 * step);
  }
  if (i + stride >= n) {  // last sample: backward
    return (25.0 * at(0) - 48.0 * at(-1) + 36.0 * at(-2) - 16.0 * at(-3) + 3.0 * at(-4)) / (12.0 * step);
  }
  return (3.0 * at(1) + 10.0 * at(0) - 18.0 * at(-1) + 6.0 * at(-2) - at(-3)) / (12.0 * step);
}

}  // namespace

PhaseProfile phi_and_derivative(std::span<const double> times, std::span<const double> omega_a,
                                std::span<const double> omega_eff) {
  if (omega_a.size() != times.size() || omega_eff.size() != times.size()) {
    throw ContractError("phase inputs must share the time grid");
  }
  const double h = grid_step(times);
  const std::size_t n = times.size();

  PhaseProfile out;
  out.phi.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(omega_eff[i] > 0.0) && i > 0 && i + 1 < n) {
      throw SingularityError("effective Rabi frequency vanishes at t = " + std::to_string(times[i]) + " s",
                             times[i]);
    }
    // atan2 equals atan(a / eff) for eff > 0 and stays finite at the ends.
    out.phi[i] = std::atan2(omega_a[i], omega_eff[i]);
  }

  out.phi_dot.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.phi_dot[i] = five_point(out.phi, i, 1, h);

  double scale = 0.0;
  for (double d : out.phi_dot) scale = std::max(scale, std::abs(d));
  const double floor = 1e-3 * scale;
  for (std::size_t i = 4; i + 4 < n; ++i) {
    const double coarse = five_point(out.phi, i, 2, h);
    const double fine = out.phi_dot[i];
    if (std::abs(fine - coarse) > kRichardsonTolerance * std::max(std::abs(fine), floor)) {
      out.flagged.push_back(i);
    }
  }
  return out;
}

std::vector<double> uniform_grid(double start, double stop, std::size_t samples) {
  if (samples < 2) throw ContractError("a grid needs at least two samples");
  std::vector<double> grid(samples);
  const double span = stop - start;
  const double last = static_cast<double>(samples - 1);
  for (std::size_t i = 0; i < samples; ++i) {
    grid[i] = start + span * (static_cast<double>(i) / last);
  }
  return grid;
}

double PulseTable::shortcut_peak() const {
  double peak = 0.0;
  for (const auto& r : rows) peak = std::max({peak, r.omega_p_tilde, r.omega_s_tilde});
  return peak;
}

double PulseTable::original_peak() const {
  double peak = 0.0;
  for (const auto& r : rows) peak = std::max({peak, r.omega_p, r.omega_s});
  return peak;
}

PulseTable stirsap_pulses(const PulseConfig& cfg, const SystemConfig& system,
                          std::span<const double> times, double min_samples_per_duration) {
  require_valid(cfg, system);
  const std::size_t n = times.size();
  if (n < 5) throw ContractError("pulse grid needs at least 5 samples");
  const double span = times.back() - times.front();
  const double density = static_cast<double>(n - 1) * cfg.total_time / span;
  if (density + 1e-9 < min_samples_per_duration) {
    throw ContractError("pulse grid too coarse: " + std::to_string(density) + " samples per duration");
  }

  PulseTable table;
  table.rows.resize(n);
  std::vector<double> omega_a(n), omega_eff(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto pair = detail::gaussian_pair_unchecked(cfg, times[i]);
    auto& row = table.rows[i];
    row.t = times[i];
    row.omega_p = pair.omega_p;
    row.omega_s = pair.omega_s;
    const auto coupling = effective_params(pair, system);
    row.effective.delta_eff = coupling.delta_eff;
    row.effective.omega_eff = coupling.omega_eff;
    row.effective.omega_a = counter_diabatic_rabi(pair);
    omega_a[i] = row.effective.omega_a;
    omega_eff[i] = coupling.omega_eff;
  }

  auto phase = phi_and_derivative(times, omega_a, omega_eff);
  table.flagged = std::move(phase.flagged);
  for (std::size_t i = 0; i < n; ++i) {
    auto& e = table.rows[i].effective;
    e.phi = phase.phi[i];
    e.phi_dot = phase.phi_dot[i];
    e.delta_eff_tilde = e.delta_eff + e.phi_dot;
    e.omega_eff_tilde = std::hypot(e.omega_eff, e.omega_a);
    const auto raman = raman_pair_from_effective(e.delta_eff_tilde, e.omega_eff_tilde, system.detuning);
    table.rows[i].omega_p_tilde = raman.omega_p;
    table.rows[i].omega_s_tilde = raman.omega_s;
  }
  return table;
}

PulseTable stirsap_pulses(const PulseConfig& cfg, const SystemConfig& system, std::size_t samples) {
  const auto grid = uniform_grid(0.0, cfg.total_time, samples);
  return stirsap_pulses(cfg, system, grid);
}

}  // namespace stirsap
