#include "gridlab/worldgen.hpp"

#include <cmath>
#include <deque>
#include <sstream>

#include <fmt/format.h>

namespace gridlab {

namespace {

template <typename T>
void shuffle(std::vector<T>& v, RngStream& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::size_t j = rng.below(i);
    std::swap(v[i - 1], v[j]);
  }
}

std::vector<Position> interior_cells_of(const Grid& g, Tile t) {
  std::vector<Position> out;
  for (int r = 1; r < g.size() - 1; ++r) {
    for (int c = 1; c < g.size() - 1; ++c) {
      if (g.at({c, r}) == t) out.push_back({c, r});
    }
  }
  return out;
}

struct Attempt {
  std::optional<WorldState> world;
  GenReport report;
};

Attempt attempt_generation(const EpisodeConfig& cfg, RngStream& rng) {
  const int n = cfg.grid_size;
  Grid grid(n, Tile::Empty);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      if (grid.is_border({c, r})) {
        grid.set({c, r}, Tile::Wall);
      } else if (rng.bernoulli(cfg.wall_density)) {
        grid.set({c, r}, Tile::Wall);
      }
    }
  }
  carve_corridors(grid, rng);

  std::vector<Position> free = interior_cells_of(grid, Tile::Empty);
  shuffle(free, rng);

  std::vector<Tile> objects;
  objects.insert(objects.end(), static_cast<std::size_t>(cfg.doors), Tile::Door);
  objects.insert(objects.end(), static_cast<std::size_t>(cfg.pads), Tile::Pad);
  objects.insert(objects.end(), static_cast<std::size_t>(cfg.energy_tiles), Tile::Energy);
  objects.insert(objects.end(), static_cast<std::size_t>(cfg.rule_tiles), Tile::Rule);
  objects.insert(objects.end(), static_cast<std::size_t>(cfg.key_tiles), Tile::Key);
  // One more free cell is needed for the agent.
  if (free.size() < objects.size() + 1) return {};

  std::size_t next = 0;
  for (Tile t : objects) grid.set(free[next++], t);

  // Density-driven extras over the remaining free cells.
  std::vector<Position> remaining;
  for (std::size_t i = next; i < free.size(); ++i) {
    const Position p = free[i];
    if (rng.bernoulli(cfg.hazard_density)) {
      grid.set(p, Tile::Hazard);
    } else if (rng.bernoulli(cfg.energy_density)) {
      grid.set(p, Tile::Energy);
    } else if (rng.bernoulli(cfg.rule_density)) {
      grid.set(p, Tile::Rule);
    } else {
      remaining.push_back(p);
    }
  }
  if (remaining.empty()) return {};

  const Position agent = remaining[rng.below(remaining.size())];
  const Direction facing = kDirections[rng.below(kDirections.size())];

  std::vector<Position> eligible;
  for (Position p : remaining) {
    if (p != agent) eligible.push_back(p);
  }
  const auto latent_count =
      static_cast<std::size_t>(std::lround(cfg.latent_fraction * static_cast<double>(eligible.size())));
  shuffle(eligible, rng);
  for (std::size_t i = 0; i < latent_count && i < eligible.size(); ++i) {
    grid.set(eligible[i], Tile::Latent);
  }

  WorldState world = make_world(cfg, std::move(grid), agent, facing);
  auto check = validate_solvable(world, cfg);
  if (!check.solvable) return {std::nullopt, check.report};
  return {std::move(world), check.report};
}

}  // namespace

WorldState make_world(const EpisodeConfig& config, Grid grid, Position agent, Direction facing) {
  WorldState w;
  w.config = config;
  w.grid = std::move(grid);
  w.agent = agent;
  w.facing = facing;
  const auto pads = w.grid.find_all(Tile::Pad);
  w.pad = pads.empty() ? agent : pads.front();
  const auto doors = w.grid.find_all(Tile::Door);
  w.door = doors.empty() ? Position{-1, -1} : doors.front();
  w.energy = config.initial_energy;
  w.scan_cost = config.scan_cost;
  w.measure_cost = config.measure_cost;
  w.dynamics = RngStream(config.seed, "dynamics");
  w.collapse = RngStream(config.seed, "collapse");
  return w;
}

void carve_corridors(Grid& grid, RngStream& rng) {
  const int n = grid.size();
  if (n < 3) return;
  const int interior = n - 2;
  const int walks = n;
  const int length = 2 * n;
  for (int w = 0; w < walks; ++w) {
    Position p{1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(interior))),
               1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(interior)))};
    if (grid.at(p) == Tile::Wall) grid.set(p, Tile::Empty);
    for (int s = 0; s < length; ++s) {
      const Position q = p + direction_delta(kDirections[rng.below(4)]);
      if (grid.is_border(q)) continue;
      p = q;
      if (grid.at(p) == Tile::Wall) grid.set(p, Tile::Empty);
    }
  }
}

SolvabilityCheck validate_solvable(const WorldState& world, const EpisodeConfig& config) {
  const Grid& g = world.grid;
  const int n = g.size();
  std::vector<char> seen(static_cast<std::size_t>(n * n), 0);
  auto idx = [n](Position p) { return static_cast<std::size_t>(p.row * n + p.col); };

  GenReport report;
  report.attempts = 1;
  std::deque<Position> queue{world.agent};
  seen[idx(world.agent)] = 1;
  while (!queue.empty()) {
    const Position p = queue.front();
    queue.pop_front();
    switch (g.at(p)) {
      case Tile::Key: ++report.reachable_keys; break;
      case Tile::Rule: ++report.reachable_rules; break;
      case Tile::Latent: ++report.reachable_latents; break;
      default: break;
    }
    for (Direction d : kDirections) {
      const Position q = p + direction_delta(d);
      if (!g.in_bounds(q) || seen[idx(q)]) continue;
      const Tile t = g.at(q);
      if (t == Tile::Door) report.door_reachable = true;
      if (t == Tile::Wall || t == Tile::Door) continue;
      seen[idx(q)] = 1;
      queue.push_back(q);
    }
  }
  if (g.in_bounds(world.door)) {
    const auto dist = shortest_path_len(g, world.agent, world.door,
                                        [](Tile t) { return t != Tile::Wall && t != Tile::Door; });
    report.agent_door_dist = dist ? *dist : -1;
  }
  const int obtainable = report.reachable_keys + report.reachable_rules + report.reachable_latents;
  return {report.door_reachable && obtainable >= config.keys_required + 1, report};
}

GenResult generate_map(const EpisodeConfig& config) {
  validate(config);
  GenReport last;
  for (int attempt = 0; attempt < kMaxGenerationAttempts; ++attempt) {
    RngStream rng(config.seed, attempt == 0 ? std::string("gen") : fmt::format("gen#{}", attempt));
    Attempt a = attempt_generation(config, rng);
    a.report.attempts = attempt + 1;
    last = a.report;
    if (a.world) return {std::move(*a.world), a.report};
  }
  throw GenerationFailure(
      fmt::format("map generation failed after {} attempts (N={}, seed={})",
                  kMaxGenerationAttempts, config.grid_size, config.seed),
      last);
}

std::string dump_map(const WorldState& world) {
  std::string out;
  const int n = world.grid.size();
  out.reserve(static_cast<std::size_t>(n * (n + 1) + 32));
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) out += tile_glyph(world.grid.at({c, r}));
    out += '\n';
  }
  out += fmt::format("agent {} {} {}\n", world.agent.col, world.agent.row,
                     direction_name(world.facing));
  return out;
}

ParsedMap parse_map_dump(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::vector<std::string> rows;
  std::optional<std::string> agent_line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.rfind("agent ", 0) == 0) {
      agent_line = line;
      break;
    }
    rows.push_back(line);
  }
  if (rows.empty() || !agent_line) throw RuntimeFailure("map dump: missing rows or agent line");
  const int n = static_cast<int>(rows.size());
  ParsedMap out{Grid(n, Tile::Wall), {}, Direction::N};
  for (int r = 0; r < n; ++r) {
    if (static_cast<int>(rows[static_cast<std::size_t>(r)].size()) != n) {
      throw RuntimeFailure(fmt::format("map dump: row {} has wrong width", r));
    }
    for (int c = 0; c < n; ++c) {
      const auto t = tile_from_glyph(rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]);
      if (!t) throw RuntimeFailure(fmt::format("map dump: bad glyph at row {} col {}", r, c));
      out.grid.set({c, r}, *t);
    }
  }
  std::istringstream al(*agent_line);
  std::string tag, facing;
  if (!(al >> tag >> out.agent.col >> out.agent.row >> facing)) {
    throw RuntimeFailure("map dump: malformed agent line");
  }
  const auto d = direction_from_name(facing);
  if (!d || !out.grid.in_bounds(out.agent)) throw RuntimeFailure("map dump: malformed agent line");
  out.facing = *d;
  return out;
}

}  // namespace gridlab
