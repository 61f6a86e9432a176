#include "stirsap/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <optional>

#include "stirsap/errors.hpp"

namespace stirsap {

namespace {

enum class Quantity { Frequency, Time, Plain };

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_number(std::string_view text, std::size_t line, std::string_view* rest = nullptr) {
  text = trim(text);
  // from_chars rejects a leading '+'.
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr == text.data()) {
    throw ParseError("malformed number '" + std::string(text) + "'", line);
  }
  const std::string_view tail = trim(text.substr(static_cast<std::size_t>(ptr - text.data())));
  if (rest) {
    *rest = tail;
  } else if (!tail.empty()) {
    throw ParseError("unexpected text after number: '" + std::string(tail) + "'", line);
  }
  if (!std::isfinite(value)) throw ParseError("number must be finite", line);
  return value;
}

double parse_quantity(std::string_view text, Quantity quantity, std::size_t line) {
  std::string_view unit;
  const double value = parse_number(text, line, &unit);
  static const std::map<std::string_view, double, std::less<>> frequency_units{
      {"", 1.0}, {"Hz", 1.0}, {"kHz", 1e3}, {"MHz", 1e6}, {"GHz", 1e9}};
  static const std::map<std::string_view, double, std::less<>> time_units{
      {"", 1.0}, {"s", 1.0}, {"ms", 1e-3}, {"us", 1e-6}, {"ns", 1e-9}};
  switch (quantity) {
    case Quantity::Frequency: {
      const auto it = frequency_units.find(unit);
      if (it == frequency_units.end()) throw ParseError("unknown frequency unit '" + std::string(unit) + "'", line);
      return kTwoPi * value * it->second;
    }
    case Quantity::Time: {
      const auto it = time_units.find(unit);
      if (it == time_units.end()) throw ParseError("unknown time unit '" + std::string(unit) + "'", line);
      return value * it->second;
    }
    case Quantity::Plain:
      if (!unit.empty()) throw ParseError("unexpected unit '" + std::string(unit) + "'", line);
      return value;
  }
  return value;
}

std::size_t parse_count(std::string_view text, std::size_t line) {
  const double v = parse_number(text, line);
  if (v < 0.0 || v != std::floor(v) || v > 1e12) throw ParseError("expected a non-negative integer", line);
  return static_cast<std::size_t>(v);
}

std::vector<double> parse_list(std::string_view text, std::size_t line) {
  std::vector<double> out;
  while (true) {
    const auto comma = text.find(',');
    out.push_back(parse_number(text.substr(0, comma), line));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

struct Pending {
  std::optional<double> detuning, reference_rabi, peak_pump, peak_stokes, total_time, width, delay, laser_phase;
  std::map<std::string, std::size_t, std::less<>> lines;  // key -> line that set it
};

using Setter = std::function<void(Pending&, CampaignOptions&, std::string_view, std::size_t)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table{
      {"detuning", [](Pending& p, CampaignOptions&, std::string_view v, std::size_t l) {
         p.detuning = parse_quantity(v, Quantity::Frequency, l);
       }},
      {"reference_rabi", [](Pending& p, CampaignOptions&, std::string_view v, std::size_t l) {
         p.reference_rabi = parse_quantity(v, Quantity::Frequency, l);
       }},
      {"peak_pump", [](Pending& p, CampaignOptions&, std::string_view v, std::size_t l) {
         p.peak_pump = parse_quantity(v, Quantity::Frequency, l);
       }},
      {"peak_stokes", [](Pending& p, CampaignOptions&, std::string_view v, std::size_t l) {
         p.peak_stokes = parse_quantity(v, Quantity::Frequency, l);
       }},
      {"total_time", [](Pending& p, CampaignOptions&, std::string_view v, std::size_t l) {
         p.total_time = parse_quantity(v, Quantity::Time, l);
       }},
      {"width", [](Pending& p, CampaignOptions&, std::string_view v, std::size_t l) {
         p.width = parse_quantity(v, Quantity::Time, l);
       }},
      {"delay", [](Pending& p, CampaignOptions&, std::string_view v, std::size_t l) {
         p.delay = parse_quantity(v, Quantity::Time, l);
       }},
      {"laser_phase", [](Pending& p, CampaignOptions&, std::string_view v, std::size_t l) {
         p.laser_phase = parse_quantity(v, Quantity::Plain, l);
       }},
      {"protocol", [](Pending&, CampaignOptions& o, std::string_view v, std::size_t l) {
         const auto protocol = parse_protocol(trim(v));
         if (!protocol) throw ParseError("unknown protocol '" + std::string(trim(v)) + "'", l);
         o.protocol = *protocol;
       }},
      {"fidelity_target", [](Pending&, CampaignOptions& o, std::string_view v, std::size_t l) {
         o.fidelity_target = parse_number(v, l);
         if (!(o.fidelity_target >= 0.0 && o.fidelity_target < 1.0)) {
           throw ParseError("fidelity_target must lie in [0, 1)", l);
         }
       }},
      {"grid_samples", [](Pending&, CampaignOptions& o, std::string_view v, std::size_t l) {
         o.grid_samples = parse_count(v, l);
         if (o.grid_samples < 1000) throw ParseError("grid_samples must be at least 1000", l);
       }},
      {"threads", [](Pending&, CampaignOptions& o, std::string_view v, std::size_t l) {
         o.threads = static_cast<unsigned>(parse_count(v, l));
       }},
      {"cycles", [](Pending&, CampaignOptions& o, std::string_view v, std::size_t l) {
         o.cycles = parse_count(v, l);
         if (o.cycles == 0) throw ParseError("cycles must be at least 1", l);
       }},
      {"initial_population_1", [](Pending&, CampaignOptions& o, std::string_view v, std::size_t l) {
         o.initial_population_1 = parse_number(v, l);
         if (!(o.initial_population_1 >= 0.0 && o.initial_population_1 <= 1.0)) {
           throw ParseError("initial_population_1 must lie in [0, 1]", l);
         }
       }},
      {"initial_phase", [](Pending&, CampaignOptions& o, std::string_view v, std::size_t l) {
         o.initial_phase = parse_number(v, l);
       }},
      {"time_grid", [](Pending&, CampaignOptions& o, std::string_view v, std::size_t l) {
         o.time_grid = parse_list(v, l);
         for (double t : o.time_grid) {
           if (!(t > 0.0)) throw ParseError("time_grid entries must be positive", l);
         }
       }},
      {"peak_min", [](Pending&, CampaignOptions& o, std::string_view v, std::size_t l) {
         o.peak_min = parse_number(v, l);
       }},
      {"peak_max", [](Pending&, CampaignOptions& o, std::string_view v, std::size_t l) {
         o.peak_max = parse_number(v, l);
       }},
      {"peak_step", [](Pending&, CampaignOptions& o, std::string_view v, std::size_t l) {
         o.peak_step = parse_number(v, l);
         if (!(o.peak_step > 0.0)) throw ParseError("peak_step must be positive", l);
       }},
      {"sweep_samples", [](Pending&, CampaignOptions& o, std::string_view v, std::size_t l) {
         o.sweep_samples = parse_count(v, l);
         if (o.sweep_samples == 0) throw ParseError("sweep_samples must be at least 1", l);
       }},
      {"comparison_time", [](Pending&, CampaignOptions& o, std::string_view v, std::size_t l) {
         o.comparison_time = parse_quantity(v, Quantity::Time, l);
         if (!(o.comparison_time > 0.0)) throw ParseError("comparison_time must be positive", l);
       }},
  };
  return table;
}

void apply_line(std::string_view raw, std::size_t line, Pending& pending, CampaignOptions& options) {
  const auto hash = raw.find('#');
  const std::string_view content = trim(raw.substr(0, hash));
  if (content.empty()) return;
  const auto eq = content.find('=');
  if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", line);
  const std::string_view key = trim(content.substr(0, eq));
  const std::string_view value = trim(content.substr(eq + 1));
  if (value.empty()) throw ParseError("missing value for '" + std::string(key) + "'", line);
  const auto it = setters().find(key);
  if (it == setters().end()) throw ParseError("unknown key '" + std::string(key) + "'", line);
  it->second(pending, options, value, line);
  pending.lines[std::string(key)] = line;
}

}  // namespace

std::vector<double> CampaignOptions::peak_grid() const {
  if (!(peak_step > 0.0) || peak_max < peak_min) throw DomainError("invalid peak grid");
  std::vector<double> grid;
  const auto count = static_cast<std::size_t>(std::floor((peak_max - peak_min) / peak_step + 1e-9)) + 1;
  for (std::size_t i = 0; i < count; ++i) grid.push_back(peak_min + peak_step * static_cast<double>(i));
  return grid;
}

RunConfig default_run_config() {
  RunConfig config;
  config.system = reference_system();
  config.pulses = reference_pulses(config.system, 0.4e-3);
  return config;
}

RunConfig parse_config(std::string_view text, std::span<const std::string> overrides) {
  Pending pending;
  RunConfig config = default_run_config();
  std::size_t line = 0;
  while (!text.empty() || line == 0) {
    ++line;
    const auto nl = text.find('\n');
    apply_line(text.substr(0, nl), line, pending, config.options);
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
  for (const auto& extra : overrides) apply_line(extra, ++line, pending, config.options);

  auto& sys = config.system;
  if (pending.detuning) sys.detuning = *pending.detuning;
  if (pending.reference_rabi) sys.reference_rabi = *pending.reference_rabi;
  auto& p = config.pulses;
  p.total_time = pending.total_time.value_or(p.total_time);
  p = PulseConfig::from_total_time(p.total_time, pending.peak_pump.value_or(sys.reference_rabi),
                                   pending.peak_stokes.value_or(sys.reference_rabi), pending.laser_phase.value_or(0.0));
  if (pending.width) p.width = *pending.width;
  if (pending.delay) p.delay = *pending.delay;

  const auto report = validate_config(p, sys);
  if (const auto* failure = report.first_failure()) {
    const auto it = pending.lines.find(failure->name);
    const std::size_t where = it != pending.lines.end() ? it->second : line;
    throw ParseError(failure->message, where);
  }
  return config;
}

std::vector<std::string> known_config_keys() {
  std::vector<std::string> keys;
  for (const auto& [k, _] : setters()) keys.push_back(k);
  return keys;
}

nlohmann::json to_json(const RunConfig& config) {
  const auto& p = config.pulses;
  const auto& s = config.system;
  const auto& o = config.options;
  return {
      {"pulses",
       {{"peak_pump", p.peak_pump},
        {"peak_stokes", p.peak_stokes},
        {"total_time", p.total_time},
        {"width", p.width},
        {"delay", p.delay},
        {"laser_phase", p.laser_phase}}},
      {"system", {{"detuning", s.detuning}, {"reference_rabi", s.reference_rabi}, {"pi_time", s.pi_time()}}},
      {"options",
       {{"protocol", std::string(to_string(o.protocol))},
        {"fidelity_target", o.fidelity_target},
        {"grid_samples", o.grid_samples},
        {"threads", o.threads},
        {"cycles", o.cycles},
        {"initial_population_1", o.initial_population_1},
        {"initial_phase", o.initial_phase},
        {"time_grid", o.time_grid},
        {"peak_min", o.peak_min},
        {"peak_max", o.peak_max},
        {"peak_step", o.peak_step},
        {"sweep_samples", o.sweep_samples},
        {"comparison_time", o.comparison_time}}},
      {"large_detuning", s.large_detuning(p)},
  };
}

}  // namespace stirsap
