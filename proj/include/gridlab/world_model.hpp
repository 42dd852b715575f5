#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gridlab/config.hpp"
#include "gridlab/rng.hpp"

namespace gridlab {

enum class Tile : std::uint8_t { Wall, Empty, Energy, Key, Door, Hazard, Rule, Pad, Latent };

inline constexpr std::array<Tile, 9> kAllTiles = {Tile::Wall,   Tile::Empty, Tile::Energy,
                                                  Tile::Key,    Tile::Door,  Tile::Hazard,
                                                  Tile::Rule,   Tile::Pad,   Tile::Latent};

// Map glyphs: # . e k D h R P o
char tile_glyph(Tile t);
std::optional<Tile> tile_from_glyph(char c);

enum class Direction : std::uint8_t { N, S, E, W };

inline constexpr std::array<Direction, 4> kDirections = {Direction::N, Direction::S, Direction::E,
                                                         Direction::W};

struct Offset {
  int dcol = 0;
  int drow = 0;
  bool operator==(const Offset&) const = default;
};

// Row grows downward: N is (0,-1).
Offset direction_delta(Direction d);
std::string_view direction_name(Direction d);
std::optional<Direction> direction_from_name(std::string_view s);
char agent_glyph_ascii(Direction d);          // ^ v > <
std::string_view agent_glyph_unicode(Direction d);  // ▲ ▼ ▶ ◀

struct Position {
  int col = 0;
  int row = 0;
  auto operator<=>(const Position&) const = default;
  Position operator+(Offset o) const { return {col + o.dcol, row + o.drow}; }
};

int chebyshev(Position a, Position b);
int manhattan(Position a, Position b);

enum class Action : std::uint8_t { MoveN, MoveS, MoveE, MoveW, Interact, Scan, Measure };

inline constexpr std::array<Action, 7> kAllActions = {Action::MoveN,    Action::MoveS, Action::MoveE,
                                                      Action::MoveW,    Action::Interact,
                                                      Action::Scan,     Action::Measure};

std::string_view action_token(Action a);
// Case-sensitive exact match against the seven canonical tokens; no trimming.
std::optional<Action> parse_action_token(std::string_view s);
std::optional<Direction> move_direction(Action a);
Action move_action(Direction d);

class Grid {
 public:
  Grid() = default;
  Grid(int size, Tile fill) : size_(size), cells_(static_cast<std::size_t>(size * size), fill) {}

  int size() const { return size_; }
  bool in_bounds(Position p) const {
    return p.col >= 0 && p.row >= 0 && p.col < size_ && p.row < size_;
  }
  bool is_border(Position p) const {
    return p.col == 0 || p.row == 0 || p.col == size_ - 1 || p.row == size_ - 1;
  }
  Tile at(Position p) const { return cells_[index(p)]; }
  void set(Position p, Tile t) { cells_[index(p)] = t; }

  int count(Tile t) const;
  // Row-major order.
  std::vector<Position> find_all(Tile t) const;
  const std::vector<Tile>& cells() const { return cells_; }

  bool operator==(const Grid&) const = default;

 private:
  std::size_t index(Position p) const { return static_cast<std::size_t>(p.row * size_ + p.col); }

  int size_ = 0;
  std::vector<Tile> cells_;
};

enum class WeatherMode : std::uint8_t { Calm, Storm };
enum class Outcome : std::uint8_t { Running, ExitSuccess, Timeout };

std::string_view outcome_name(Outcome o);  // RUNNING, EXIT_SUCCESS, TIMEOUT
std::optional<Outcome> outcome_from_name(std::string_view s);

struct WorldState {
  EpisodeConfig config;
  Grid grid;
  Position agent;
  Direction facing = Direction::N;
  Position pad;
  Position door;
  int energy = 0;
  int keys = 0;
  double score = 0.0;
  int step = 0;
  WeatherMode weather = WeatherMode::Calm;
  bool drift_active = false;
  // Observation-side flag: consumed by the next rendered window.
  bool scan_boost_pending = false;
  int scan_cost = 0;
  int measure_cost = 0;
  Outcome outcome = Outcome::Running;
  RngStream dynamics;
  RngStream collapse;

  bool measure_enabled() const { return config.latent_fraction > 0.0; }
};

// Hash of the ground-truth game state: grid, pose, counters, regime, costs,
// outcome and the dynamics/collapse stream positions. The scan flag is an
// observation concern and is excluded, as is anything owned by the observer.
std::uint64_t world_hash(const WorldState& w);

using Passable = std::function<bool(Tile)>;

// 4-connected BFS step count from `from` to `to`. Intermediate cells must
// satisfy `passable`; `to` itself need not. nullopt when unreachable.
std::optional<int> shortest_path_len(const Grid& grid, Position from, Position to,
                                     const Passable& passable);

}  // namespace gridlab
