#pragma once

#include <string>
#include <string_view>

#include "gridlab/errors.hpp"
#include "gridlab/world_model.hpp"

namespace gridlab {

struct GenReport {
  int attempts = 0;
  int reachable_keys = 0;
  int reachable_rules = 0;
  int reachable_latents = 0;
  bool door_reachable = false;
  int agent_door_dist = -1;  // -1 when unreachable
};

struct GenResult {
  WorldState world;
  GenReport report;
};

class GenerationFailure : public RuntimeFailure {
 public:
  GenerationFailure(const std::string& what, GenReport last)
      : RuntimeFailure(what), last_report(last) {}
  GenReport last_report;
};

inline constexpr int kMaxGenerationAttempts = 100;

// Builds the initial world for config.seed. Attempts are re-drawn from
// derived sub-streams until validate_solvable accepts one.
GenResult generate_map(const EpisodeConfig& config);

// N random walks of length 2N from random interior cells; visited interior
// walls become Empty. Border cells are never touched.
void carve_corridors(Grid& grid, RngStream& rng);

struct SolvabilityCheck {
  bool solvable = false;
  GenReport report;
};

// Door adjacent-reachable from the agent with {Wall, Door} impassable, and
// reachable keys + rules + latents >= K + 1.
SolvabilityCheck validate_solvable(const WorldState& world, const EpisodeConfig& config);

// A fresh world around an existing grid, with counters, costs and the
// dynamics/collapse streams initialised from config.seed.
WorldState make_world(const EpisodeConfig& config, Grid grid, Position agent, Direction facing);

// One row per line, then "agent <col> <row> <facing>".
std::string dump_map(const WorldState& world);

struct ParsedMap {
  Grid grid;
  Position agent;
  Direction facing = Direction::N;
};
ParsedMap parse_map_dump(std::string_view text);

}  // namespace gridlab
