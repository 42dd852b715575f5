#include <fstream>
#include <map>
#include <sstream>

#include "doctest.h"
#include "gridlab/worldgen.hpp"
#include "helpers.hpp"

using namespace gridlab;
using gridlab::testing::world_from_rows;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::map<Tile, int> census(const Grid& g) {
  std::map<Tile, int> out;
  for (Tile t : g.cells()) ++out[t];
  return out;
}

bool border_is_wall(const Grid& g) {
  for (int r = 0; r < g.size(); ++r)
    for (int c = 0; c < g.size(); ++c)
      if (g.is_border({c, r}) && g.at({c, r}) != Tile::Wall) return false;
  return true;
}

}  // namespace

TEST_CASE("zero densities on 6x6 place exactly the fixed objects") {
  EpisodeConfig c;
  c.grid_size = 6;
  c.wall_density = c.hazard_density = c.energy_density = c.rule_density = 0;
  c.latent_fraction = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    c.seed = seed;
    const auto g = generate_map(c);
    const auto n = census(g.world.grid);
    CHECK(n.at(Tile::Wall) == 20);
    CHECK(n.at(Tile::Door) == 1);
    CHECK(n.at(Tile::Pad) == 1);
    CHECK(n.at(Tile::Energy) == 1);
    CHECK(n.at(Tile::Rule) == 2);
    CHECK(n.at(Tile::Key) == 2);
    CHECK(n.at(Tile::Empty) == 9);
    CHECK(g.world.grid.at(g.world.agent) == Tile::Empty);
  }
}

TEST_CASE("same seed gives byte-identical maps, different seeds differ") {
  EpisodeConfig c;
  c.seed = 77;
  CHECK(dump_map(generate_map(c).world) == dump_map(generate_map(c).world));
  EpisodeConfig d = c;
  d.seed = 78;
  CHECK(dump_map(generate_map(c).world) != dump_map(generate_map(d).world));
}

TEST_CASE("9x9 golden map") {
  EpisodeConfig c;
  c.grid_size = 9;
  c.seed = 2024;
  const auto g = generate_map(c);
  const std::string golden = read_file(GRIDLAB_FIXTURES "/map_9x9_seed2024.txt");
  CHECK(dump_map(g.world) == golden);
  CHECK(census(parse_map_dump(golden).grid) == census(g.world.grid));
  CHECK(g.report.agent_door_dist == 2);
}

TEST_CASE("dump round trip") {
  EpisodeConfig c;
  c.seed = 5;
  c.latent_fraction = 0.2;
  const auto w = generate_map(c).world;
  const ParsedMap m = parse_map_dump(dump_map(w));
  CHECK(m.grid == w.grid);
  CHECK(m.agent == w.agent);
  CHECK(m.facing == w.facing);
  CHECK_THROWS_AS(parse_map_dump("####\n#..\n"), RuntimeFailure);
  CHECK_THROWS_AS(parse_map_dump("####\n#..#\n#..#\n####\nagent 9 9 N\n"), RuntimeFailure);
}

TEST_CASE("carve_corridors") {
  SUBCASE("no interior walls: unchanged") {
    Grid g = world_from_rows({"######", "#....#", "#....#", "#....#", "#....#", "######"}, {1, 1}).grid;
    const Grid before = g;
    RngStream rng(1, "gen");
    carve_corridors(g, rng);
    CHECK(g == before);
  }
  SUBCASE("fully walled interior opens up, border intact") {
    Grid g(6, Tile::Wall);
    RngStream rng(1, "gen");
    carve_corridors(g, rng);
    int empty = 0;
    for (int r = 1; r < 5; ++r)
      for (int c = 1; c < 5; ++c) empty += g.at({c, r}) == Tile::Empty;
    CHECK(empty * 10 >= 16 * 3);
    CHECK(border_is_wall(g));
  }
}

TEST_CASE("validate_solvable") {
  EpisodeConfig c;
  SUBCASE("open 6x6 with default counts") {
    auto w = world_from_rows({"######", "#kkRR#", "#....#", "#.P.e#", "#...D#", "######"}, {1, 2});
    const auto r = validate_solvable(w, c);
    CHECK(r.solvable);
    CHECK(r.report.reachable_keys == 2);
    CHECK(r.report.reachable_rules == 2);
    CHECK(r.report.door_reachable);
  }
  SUBCASE("door walled off") {
    auto w = world_from_rows({"######", "#kkR##", "#R.#D#", "#.P###", "#..e.#", "######"}, {1, 3});
    CHECK_FALSE(validate_solvable(w, c).solvable);
  }
  SUBCASE("one key walled off, no latents: 1 + 2 + 0 < 4") {
    auto w = world_from_rows({"######", "#k.R.#", "#..R.#", "#.P.##", "#.eD#k", "######"}, {1, 2});
    const auto r = validate_solvable(w, c);
    CHECK_FALSE(r.solvable);
    CHECK(r.report.reachable_keys == 1);
  }
}

TEST_CASE("500 default 8x8 maps are solvable with exact object counts") {
  EpisodeConfig c;
  for (std::uint64_t s = 0; s < 500; ++s) {
    c.seed = s;
    const auto g = generate_map(c);
    const auto n = census(g.world.grid);
    REQUIRE(validate_solvable(g.world, c).solvable);
    CHECK(g.report.attempts >= 1);
    CHECK(g.report.door_reachable);
    CHECK(n.at(Tile::Door) == 1);
    CHECK(n.at(Tile::Pad) == 1);
    CHECK(n.at(Tile::Key) == 2);
    CHECK(n.count(Tile::Rule) == 1);
    CHECK(n.at(Tile::Rule) == 2);
    CHECK(n.at(Tile::Energy) >= 1);
    CHECK(border_is_wall(g.world.grid));
    const Tile under = g.world.grid.at(g.world.agent);
    CHECK(under == Tile::Empty);
  }
}

TEST_CASE("latent count follows latent_fraction") {
  EpisodeConfig c;
  c.latent_fraction = 0.2;
  for (std::uint64_t s = 0; s < 50; ++s) {
    c.seed = s;
    EpisodeConfig base = c;
    base.latent_fraction = 0.0;
    const auto with = generate_map(c);
    const auto n = census(with.world.grid);
    const int latents = n.count(Tile::Latent) ? n.at(Tile::Latent) : 0;
    // Eligible cells are the Empty cells left after placement, minus the agent's.
    const int eligible = latents + (n.count(Tile::Empty) ? n.at(Tile::Empty) : 0) - 1;
    CHECK(std::abs(latents - static_cast<int>(std::lround(0.2 * eligible))) <= 1);
    CHECK(with.world.grid.at(with.world.agent) != Tile::Latent);
  }
}

TEST_CASE("impossible configuration fails after the attempt limit") {
  EpisodeConfig c;
  c.key_tiles = 0;
  c.rule_tiles = 0;
  c.latent_fraction = 0;
  c.rule_density = 0;
  try {
    generate_map(c);
    FAIL("expected GenerationFailure");
  } catch (const GenerationFailure& e) {
    CHECK(e.last_report.attempts == kMaxGenerationAttempts);
    CHECK(e.last_report.reachable_keys == 0);
  }
}
