#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"

namespace gridlab {

// nullopt means the event never fires.
using Schedule = std::optional<int>;

struct EpisodeConfig {
  int grid_size = 8;
  int obs_radius = 2;
  int keys_required = 3;
  int step_budget = 200;

  double noise_rate = 0.0;
  double move_fail = 0.0;
  double latent_fraction = 0.0;
  double hazard_spread_p = 0.02;
  Schedule shift_interval = 25;
  Schedule teleport_interval = 50;
  Schedule drift_step = 100;

  double wall_density = 0.18;
  double hazard_density = 0.08;
  double energy_density = 0.04;
  double rule_density = 0.0;

  int doors = 1;
  int pads = 1;
  int energy_tiles = 1;
  int rule_tiles = 2;
  int key_tiles = 2;

  int initial_energy = 10;
  int energy_gain = 5;
  int scan_cost = 2;
  int measure_cost = 2;
  int interact_cost = 1;
  int neutralize_cost = 3;
  double neutralize_success_p = 0.7;
  int energy_high = 5;
  int low_energy_threshold = 2;
  int scan_radius_boost = 2;
  int measure_radius = 2;

  double storm_slip = 0.08;
  double drift_slip = 0.10;
  double low_energy_slip_factor = 2.0;
  double slip_cap = 0.9;

  double score_key = 5.0;
  double score_exit = 20.0;
  double score_hazard = 10.0;
  double score_step = 1.0;

  std::uint64_t seed = 0;

  bool operator==(const EpisodeConfig&) const = default;
};

// Throws ContractViolation naming the first offending field.
void validate(const EpisodeConfig& c);

// Every stochastic or scheduled modifier off: no noise, slip, latents,
// spread, weather shifts, teleports or drift.
EpisodeConfig with_stressors_off(EpisodeConfig c);

struct ConfigField {
  std::string_view name;
  std::variant<int EpisodeConfig::*, double EpisodeConfig::*, Schedule EpisodeConfig::*,
               std::uint64_t EpisodeConfig::*>
      member;
};

const std::vector<ConfigField>& config_fields();

std::string get_field(const EpisodeConfig& c, std::string_view name);
// Schedules accept "never". Throws ContractViolation on unknown names or bad values.
void set_field(EpisodeConfig& c, std::string_view name, std::string_view value);

// key=value lines, '#' comments, every field in declaration order.
std::string config_to_kv(const EpisodeConfig& c);
EpisodeConfig config_from_kv(std::string_view text, EpisodeConfig base = {});

nlohmann::ordered_json config_to_json(const EpisodeConfig& c);
EpisodeConfig config_from_json(const nlohmann::json& j);

std::string format_schedule(Schedule s);
Schedule parse_schedule(std::string_view s);

}  // namespace gridlab
