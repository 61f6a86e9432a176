#pragma once

// Flat `key = value` configuration files.
//
//   # comment
//   detuning       = 2.5 GHz     # ordinary frequency, stored as 2 pi x value
//   total_time     = 0.4 ms
//   protocol       = stirsap
//   time_grid      = 2, 4, 8     # multiples of T_0
//
// Frequencies accept Hz, kHz, MHz, GHz (plain numbers are Hz); times accept
// s, ms, us, ns (plain numbers are seconds). Width and delay default to T/6
// and T/10 of the final total time unless set explicitly.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "stirsap/types.hpp"

namespace stirsap {

struct CampaignOptions {
  Protocol protocol = Protocol::Stirsap;
  double fidelity_target = 0.994;
  std::size_t grid_samples = 4096;  // base propagation steps per protocol duration
  unsigned threads = 0;
  std::size_t cycles = 5;
  double initial_population_1 = 1.0;  // cycles start from sqrt(p1)|1> + e^{i phase} sqrt(1 - p1)|2>
  double initial_phase = 0.0;
  std::vector<double> time_grid{2.0, 4.0, 8.0, 16.0, 25.0};  // multiples of T_0
  double peak_min = 1.01;  // multiples of Omega_0
  double peak_max = 4.0;
  double peak_step = 0.01;
  std::size_t sweep_samples = 41;
  double comparison_time = 1e-3;  // second duration on the amplitude sweep, s

  std::vector<double> peak_grid() const;  // multiples of Omega_0
};

struct RunConfig {
  PulseConfig pulses;
  SystemConfig system;
  CampaignOptions options;
};

// Reference defaults: Delta = 2 pi x 2.5 GHz, Omega_0 = 2 pi x 5 MHz,
// T = 0.4 ms, sigma = T/6, delay = T/10, laser phase 0.
RunConfig default_run_config();

// Parses `text` followed by `overrides` (each one more `key = value` line,
// reported as lines after the file). Throws ParseError.
RunConfig parse_config(std::string_view text, std::span<const std::string> overrides = {});

std::vector<std::string> known_config_keys();

nlohmann::json to_json(const RunConfig& config);

}  // namespace stirsap
