#pragma once

#include <string>
#include <vector>

#include "gridlab/worldgen.hpp"

namespace gridlab::testing {

// Builds a world around hand-drawn rows with all stressors off.
inline WorldState world_from_rows(const std::vector<std::string>& rows, Position agent,
                                  Direction facing = Direction::N, EpisodeConfig config = {}) {
  std::string dump;
  for (const auto& r : rows) dump += r + "\n";
  dump += "agent " + std::to_string(agent.col) + " " + std::to_string(agent.row) + " " +
          std::string(direction_name(facing)) + "\n";
  const ParsedMap m = parse_map_dump(dump);
  config.grid_size = m.grid.size();
  return make_world(config, m.grid, m.agent, m.facing);
}

inline EpisodeConfig quiet_config(EpisodeConfig c = {}) { return with_stressors_off(c); }

}  // namespace gridlab::testing
