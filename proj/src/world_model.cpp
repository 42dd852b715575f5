#include "gridlab/world_model.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <cstring>

#include "gridlab/errors.hpp"

namespace gridlab {

char tile_glyph(Tile t) {
  switch (t) {
    case Tile::Wall: return '#';
    case Tile::Empty: return '.';
    case Tile::Energy: return 'e';
    case Tile::Key: return 'k';
    case Tile::Door: return 'D';
    case Tile::Hazard: return 'h';
    case Tile::Rule: return 'R';
    case Tile::Pad: return 'P';
    case Tile::Latent: return 'o';
  }
  return '?';
}

std::optional<Tile> tile_from_glyph(char c) {
  for (Tile t : kAllTiles) {
    if (tile_glyph(t) == c) return t;
  }
  return std::nullopt;
}

Offset direction_delta(Direction d) {
  switch (d) {
    case Direction::N: return {0, -1};
    case Direction::S: return {0, 1};
    case Direction::E: return {1, 0};
    case Direction::W: return {-1, 0};
  }
  return {};
}

std::string_view direction_name(Direction d) {
  switch (d) {
    case Direction::N: return "N";
    case Direction::S: return "S";
    case Direction::E: return "E";
    case Direction::W: return "W";
  }
  return "?";
}

std::optional<Direction> direction_from_name(std::string_view s) {
  for (Direction d : kDirections) {
    if (direction_name(d) == s) return d;
  }
  return std::nullopt;
}

char agent_glyph_ascii(Direction d) {
  switch (d) {
    case Direction::N: return '^';
    case Direction::S: return 'v';
    case Direction::E: return '>';
    case Direction::W: return '<';
  }
  return '@';
}

std::string_view agent_glyph_unicode(Direction d) {
  switch (d) {
    case Direction::N: return "▲";
    case Direction::S: return "▼";
    case Direction::E: return "▶";
    case Direction::W: return "◀";
  }
  return "@";
}

int chebyshev(Position a, Position b) {
  return std::max(std::abs(a.col - b.col), std::abs(a.row - b.row));
}

int manhattan(Position a, Position b) { return std::abs(a.col - b.col) + std::abs(a.row - b.row); }

std::string_view action_token(Action a) {
  switch (a) {
    case Action::MoveN: return "MOVE_N";
    case Action::MoveS: return "MOVE_S";
    case Action::MoveE: return "MOVE_E";
    case Action::MoveW: return "MOVE_W";
    case Action::Interact: return "INTERACT";
    case Action::Scan: return "SCAN";
    case Action::Measure: return "MEASURE";
  }
  return "";
}

std::optional<Action> parse_action_token(std::string_view s) {
  for (Action a : kAllActions) {
    if (action_token(a) == s) return a;
  }
  return std::nullopt;
}

std::optional<Direction> move_direction(Action a) {
  switch (a) {
    case Action::MoveN: return Direction::N;
    case Action::MoveS: return Direction::S;
    case Action::MoveE: return Direction::E;
    case Action::MoveW: return Direction::W;
    default: return std::nullopt;
  }
}

Action move_action(Direction d) {
  switch (d) {
    case Direction::N: return Action::MoveN;
    case Direction::S: return Action::MoveS;
    case Direction::E: return Action::MoveE;
    case Direction::W: return Action::MoveW;
  }
  return Action::MoveN;
}

int Grid::count(Tile t) const {
  int n = 0;
  for (Tile c : cells_) n += (c == t);
  return n;
}

std::vector<Position> Grid::find_all(Tile t) const {
  std::vector<Position> out;
  for (int r = 0; r < size_; ++r) {
    for (int c = 0; c < size_; ++c) {
      if (at({c, r}) == t) out.push_back({c, r});
    }
  }
  return out;
}

std::string_view outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Running: return "RUNNING";
    case Outcome::ExitSuccess: return "EXIT_SUCCESS";
    case Outcome::Timeout: return "TIMEOUT";
  }
  return "";
}

std::optional<Outcome> outcome_from_name(std::string_view s) {
  for (Outcome o : {Outcome::Running, Outcome::ExitSuccess, Outcome::Timeout}) {
    if (outcome_name(o) == s) return o;
  }
  return std::nullopt;
}

namespace {

class Hasher {
 public:
  void add(std::uint64_t v) { h_ = mix64(h_ ^ (v + 0x9e3779b97f4a7c15ULL + (h_ << 6) + (h_ >> 2))); }
  void add_double(double d) {
    std::uint64_t bits;
    std::memcpy(&bits, &d, sizeof bits);
    add(bits);
  }
  std::uint64_t value() const { return h_; }

 private:
  std::uint64_t h_ = 0x243f6a8885a308d3ULL;
};

}  // namespace

std::uint64_t world_hash(const WorldState& w) {
  Hasher h;
  h.add(static_cast<std::uint64_t>(w.grid.size()));
  for (Tile t : w.grid.cells()) h.add(static_cast<std::uint64_t>(t));
  h.add(static_cast<std::uint64_t>(w.agent.col));
  h.add(static_cast<std::uint64_t>(w.agent.row));
  h.add(static_cast<std::uint64_t>(w.facing));
  h.add(static_cast<std::uint64_t>(w.energy));
  h.add(static_cast<std::uint64_t>(w.keys));
  h.add_double(w.score);
  h.add(static_cast<std::uint64_t>(w.step));
  h.add(static_cast<std::uint64_t>(w.weather));
  h.add(w.drift_active ? 1 : 0);
  h.add(static_cast<std::uint64_t>(w.scan_cost));
  h.add(static_cast<std::uint64_t>(w.measure_cost));
  h.add(static_cast<std::uint64_t>(w.outcome));
  h.add(w.dynamics.counter());
  h.add(w.collapse.counter());
  return h.value();
}

std::optional<int> shortest_path_len(const Grid& grid, Position from, Position to,
                                     const Passable& passable) {
  require(grid.in_bounds(from) && grid.in_bounds(to), "shortest_path_len: endpoint out of bounds");
  if (from == to) return 0;
  const int n = grid.size();
  std::vector<int> dist(static_cast<std::size_t>(n * n), -1);
  auto idx = [n](Position p) { return static_cast<std::size_t>(p.row * n + p.col); };
  std::deque<Position> queue{from};
  dist[idx(from)] = 0;
  while (!queue.empty()) {
    const Position p = queue.front();
    queue.pop_front();
    for (Direction d : kDirections) {
      const Position q = p + direction_delta(d);
      if (!grid.in_bounds(q) || dist[idx(q)] >= 0) continue;
      if (q == to) return dist[idx(p)] + 1;
      if (!passable(grid.at(q))) continue;
      dist[idx(q)] = dist[idx(p)] + 1;
      queue.push_back(q);
    }
  }
  return std::nullopt;
}

}  // namespace gridlab
