#include "gridlab/config.hpp"

#include <charconv>
#include <sstream>

#include <fmt/format.h>

#include "gridlab/errors.hpp"

namespace gridlab {

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(std::string_view name, std::string_view text) {
  T value{};
  text = trim(text);
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw ContractViolation(fmt::format("config field '{}': cannot parse '{}'", name, text));
  }
  return value;
}

void check_fraction(std::string_view name, double v) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw ContractViolation(fmt::format("config field '{}' must lie in [0,1], got {}", name, v));
  }
}

void check_schedule(std::string_view name, Schedule s) {
  if (s && *s < 1) {
    throw ContractViolation(fmt::format("config field '{}' must be >= 1 or never", name));
  }
}

}  // namespace

std::string format_schedule(Schedule s) { return s ? std::to_string(*s) : "never"; }

Schedule parse_schedule(std::string_view s) {
  s = trim(s);
  if (s == "never" || s == "Never" || s == "NEVER") return std::nullopt;
  return parse_number<int>("schedule", s);
}

void validate(const EpisodeConfig& c) {
  if (c.grid_size < 4) throw ContractViolation("config field 'grid_size' must be >= 4");
  if (c.obs_radius < 0) throw ContractViolation("config field 'obs_radius' must be >= 0");
  if (c.keys_required < 1) throw ContractViolation("config field 'keys_required' must be >= 1");
  if (c.step_budget < 1) throw ContractViolation("config field 'step_budget' must be >= 1");
  check_fraction("noise_rate", c.noise_rate);
  check_fraction("move_fail", c.move_fail);
  check_fraction("latent_fraction", c.latent_fraction);
  check_fraction("hazard_spread_p", c.hazard_spread_p);
  check_fraction("wall_density", c.wall_density);
  check_fraction("hazard_density", c.hazard_density);
  check_fraction("energy_density", c.energy_density);
  check_fraction("rule_density", c.rule_density);
  check_fraction("neutralize_success_p", c.neutralize_success_p);
  check_fraction("slip_cap", c.slip_cap);
  check_schedule("shift_interval", c.shift_interval);
  check_schedule("teleport_interval", c.teleport_interval);
  check_schedule("drift_step", c.drift_step);
  if (c.doors != 1 || c.pads != 1) {
    throw ContractViolation("exactly one door and one pad are supported");
  }
  if (c.energy_tiles < 0 || c.rule_tiles < 0 || c.key_tiles < 0) {
    throw ContractViolation("object counts must be non-negative");
  }
  for (int v : {c.initial_energy, c.energy_gain, c.scan_cost, c.measure_cost, c.interact_cost,
                c.neutralize_cost, c.energy_high, c.low_energy_threshold, c.scan_radius_boost,
                c.measure_radius}) {
    if (v < 0) throw ContractViolation("energy constants and radii must be non-negative");
  }
}

EpisodeConfig with_stressors_off(EpisodeConfig c) {
  c.noise_rate = 0.0;
  c.move_fail = 0.0;
  c.latent_fraction = 0.0;
  c.hazard_spread_p = 0.0;
  c.shift_interval = std::nullopt;
  c.teleport_interval = std::nullopt;
  c.drift_step = std::nullopt;
  return c;
}

const std::vector<ConfigField>& config_fields() {
  using C = EpisodeConfig;
  static const std::vector<ConfigField> fields = {
      {"grid_size", &C::grid_size},
      {"obs_radius", &C::obs_radius},
      {"keys_required", &C::keys_required},
      {"step_budget", &C::step_budget},
      {"noise_rate", &C::noise_rate},
      {"move_fail", &C::move_fail},
      {"latent_fraction", &C::latent_fraction},
      {"hazard_spread_p", &C::hazard_spread_p},
      {"shift_interval", &C::shift_interval},
      {"teleport_interval", &C::teleport_interval},
      {"drift_step", &C::drift_step},
      {"wall_density", &C::wall_density},
      {"hazard_density", &C::hazard_density},
      {"energy_density", &C::energy_density},
      {"rule_density", &C::rule_density},
      {"doors", &C::doors},
      {"pads", &C::pads},
      {"energy_tiles", &C::energy_tiles},
      {"rule_tiles", &C::rule_tiles},
      {"key_tiles", &C::key_tiles},
      {"initial_energy", &C::initial_energy},
      {"energy_gain", &C::energy_gain},
      {"scan_cost", &C::scan_cost},
      {"measure_cost", &C::measure_cost},
      {"interact_cost", &C::interact_cost},
      {"neutralize_cost", &C::neutralize_cost},
      {"neutralize_success_p", &C::neutralize_success_p},
      {"energy_high", &C::energy_high},
      {"low_energy_threshold", &C::low_energy_threshold},
      {"scan_radius_boost", &C::scan_radius_boost},
      {"measure_radius", &C::measure_radius},
      {"storm_slip", &C::storm_slip},
      {"drift_slip", &C::drift_slip},
      {"low_energy_slip_factor", &C::low_energy_slip_factor},
      {"slip_cap", &C::slip_cap},
      {"score_key", &C::score_key},
      {"score_exit", &C::score_exit},
      {"score_hazard", &C::score_hazard},
      {"score_step", &C::score_step},
      {"seed", &C::seed},
  };
  return fields;
}

namespace {

const ConfigField& find_field(std::string_view name) {
  for (const auto& f : config_fields()) {
    if (f.name == name) return f;
  }
  throw ContractViolation(fmt::format("unknown config field '{}'", name));
}

struct Getter {
  const EpisodeConfig& c;
  std::string operator()(int EpisodeConfig::*m) const { return std::to_string(c.*m); }
  std::string operator()(double EpisodeConfig::*m) const { return fmt::format("{}", c.*m); }
  std::string operator()(Schedule EpisodeConfig::*m) const { return format_schedule(c.*m); }
  std::string operator()(std::uint64_t EpisodeConfig::*m) const { return std::to_string(c.*m); }
};

struct Setter {
  EpisodeConfig& c;
  std::string_view name;
  std::string_view value;
  void operator()(int EpisodeConfig::*m) const { c.*m = parse_number<int>(name, value); }
  void operator()(double EpisodeConfig::*m) const { c.*m = parse_number<double>(name, value); }
  void operator()(Schedule EpisodeConfig::*m) const {
    c.*m = parse_schedule(value);
  }
  void operator()(std::uint64_t EpisodeConfig::*m) const {
    c.*m = parse_number<std::uint64_t>(name, value);
  }
};

}  // namespace

std::string get_field(const EpisodeConfig& c, std::string_view name) {
  return std::visit(Getter{c}, find_field(name).member);
}

void set_field(EpisodeConfig& c, std::string_view name, std::string_view value) {
  std::visit(Setter{c, name, value}, find_field(name).member);
}

std::string config_to_kv(const EpisodeConfig& c) {
  std::string out;
  for (const auto& f : config_fields()) {
    out += fmt::format("{}={}\n", f.name, std::visit(Getter{c}, f.member));
  }
  return out;
}

EpisodeConfig config_from_kv(std::string_view text, EpisodeConfig base) {
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view l = trim(line);
    if (l.empty() || l.front() == '#') continue;
    const auto eq = l.find('=');
    if (eq == std::string_view::npos) {
      throw ContractViolation(fmt::format("config line {}: expected key=value", lineno));
    }
    set_field(base, trim(l.substr(0, eq)), trim(l.substr(eq + 1)));
  }
  return base;
}

nlohmann::ordered_json config_to_json(const EpisodeConfig& c) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& f : config_fields()) {
    std::visit(
        [&](auto m) {
          using M = decltype(m);
          if constexpr (std::is_same_v<M, Schedule EpisodeConfig::*>) {
            const Schedule s = c.*m;
            if (s) {
              j[std::string(f.name)] = *s;
            } else {
              j[std::string(f.name)] = nullptr;
            }
          } else {
            j[std::string(f.name)] = c.*m;
          }
        },
        f.member);
  }
  return j;
}

EpisodeConfig config_from_json(const nlohmann::json& j) {
  EpisodeConfig c;
  for (const auto& f : config_fields()) {
    const std::string key(f.name);
    if (!j.contains(key)) {
      throw ContractViolation(fmt::format("config object missing field '{}'", key));
    }
    const auto& v = j.at(key);
    std::visit(
        [&](auto m) {
          using M = decltype(m);
          if constexpr (std::is_same_v<M, Schedule EpisodeConfig::*>) {
            c.*m = v.is_null() ? Schedule{} : Schedule{v.get<int>()};
          } else if constexpr (std::is_same_v<M, int EpisodeConfig::*>) {
            c.*m = v.get<int>();
          } else if constexpr (std::is_same_v<M, double EpisodeConfig::*>) {
            c.*m = v.get<double>();
          } else {
            c.*m = v.get<std::uint64_t>();
          }
        },
        f.member);
  }
  return c;
}

}  // namespace gridlab
