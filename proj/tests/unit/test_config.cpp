#include "doctest.h"
#include "gridlab/config.hpp"
#include "gridlab/errors.hpp"

using namespace gridlab;

TEST_CASE("defaults") {
  const EpisodeConfig c;
  CHECK(c.obs_radius == 2);
  CHECK(c.keys_required == 3);
  CHECK(c.step_budget == 200);
  CHECK(c.shift_interval == Schedule{25});
  CHECK(c.teleport_interval == Schedule{50});
  CHECK(c.drift_step == Schedule{100});
  CHECK(c.doors == 1);
  CHECK(c.pads == 1);
  CHECK(c.energy_tiles == 1);
  CHECK(c.rule_tiles == 2);
  CHECK(c.key_tiles == 2);
  CHECK(c.score_key == 5.0);
  CHECK(c.score_exit == 20.0);
  CHECK(c.score_hazard == 10.0);
  CHECK(c.score_step == 1.0);
  CHECK(c.initial_energy == 10);
  CHECK(c.energy_high == 5);
  CHECK_NOTHROW(validate(c));
}

TEST_CASE("validation rejects out-of-range fields") {
  EpisodeConfig c;
  c.grid_size = 3;
  CHECK_THROWS_AS(validate(c), ContractViolation);
  c = {};
  c.keys_required = 0;
  CHECK_THROWS_AS(validate(c), ContractViolation);
  c = {};
  c.step_budget = 0;
  CHECK_THROWS_AS(validate(c), ContractViolation);
  c = {};
  c.noise_rate = 1.5;
  CHECK_THROWS_AS(validate(c), ContractViolation);
  c = {};
  c.teleport_interval = 0;
  CHECK_THROWS_AS(validate(c), ContractViolation);
  c = {};
  c.grid_size = 4;
  CHECK_NOTHROW(validate(c));
}

TEST_CASE("stressors off") {
  const EpisodeConfig c = with_stressors_off({});
  CHECK(c.noise_rate == 0.0);
  CHECK(c.move_fail == 0.0);
  CHECK(c.latent_fraction == 0.0);
  CHECK(c.hazard_spread_p == 0.0);
  CHECK_FALSE(c.shift_interval);
  CHECK_FALSE(c.teleport_interval);
  CHECK_FALSE(c.drift_step);
  CHECK(c.grid_size == 8);
}

TEST_CASE("field access by name") {
  EpisodeConfig c;
  set_field(c, "noise_rate", "0.125");
  CHECK(c.noise_rate == 0.125);
  set_field(c, "teleport_interval", "never");
  CHECK_FALSE(c.teleport_interval);
  CHECK(get_field(c, "teleport_interval") == "never");
  set_field(c, "shift_interval", "7");
  CHECK(c.shift_interval == Schedule{7});
  CHECK(get_field(c, "grid_size") == "8");
  CHECK_THROWS_AS(set_field(c, "bogus", "1"), ContractViolation);
  CHECK_THROWS_AS(set_field(c, "grid_size", "eight"), ContractViolation);
  CHECK_THROWS_AS(set_field(c, "grid_size", "8x"), ContractViolation);
}

TEST_CASE("key=value round trip covers every field") {
  EpisodeConfig c;
  c.noise_rate = 0.1234567890123;
  c.drift_step = std::nullopt;
  c.seed = 0xfedcba9876543210ULL;
  const std::string text = config_to_kv(c);
  for (const auto& f : config_fields()) CHECK(text.find(std::string(f.name) + "=") != std::string::npos);
  CHECK(config_from_kv(text) == c);
  CHECK(config_from_kv("# comment\n\ngrid_size = 10\n").grid_size == 10);
  CHECK_THROWS_AS(config_from_kv("grid_size 10\n"), ContractViolation);
}

TEST_CASE("json round trip") {
  EpisodeConfig c;
  c.move_fail = 0.0731;
  c.shift_interval = std::nullopt;
  const auto j = config_to_json(c);
  CHECK(j["shift_interval"].is_null());
  CHECK(j.begin().key() == "grid_size");
  CHECK(config_from_json(nlohmann::json::parse(j.dump())) == c);
  auto partial = nlohmann::json::parse(j.dump());
  partial.erase("seed");
  CHECK_THROWS_AS(config_from_json(partial), ContractViolation);
}
