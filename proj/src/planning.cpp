#include "gridlab/planning.hpp"

#include <algorithm>
#include <deque>

namespace gridlab {

std::optional<std::vector<Action>> plan_moves(int width, int height, NavState start,
                                              const CellPredicate& passable,
                                              const GoalPredicate& goal, bool start_counts) {
  if (start_counts && goal(start)) return std::vector<Action>{};
  auto key = [width](Position p, Direction d) {
    return (static_cast<std::size_t>(p.row) * static_cast<std::size_t>(width) +
            static_cast<std::size_t>(p.col)) *
               4 +
           static_cast<std::size_t>(d);
  };
  auto inside = [&](Position p) { return p.col >= 0 && p.row >= 0 && p.col < width && p.row < height; };
  if (!inside(start.pos)) return std::nullopt;

  const std::size_t states = static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 4;
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> parent(states, kNone);
  std::vector<Action> via(states, Action::MoveN);
  std::vector<char> seen(states, 0);

  const std::size_t root = key(start.pos, start.facing);
  seen[root] = 1;
  std::deque<NavState> queue{start};
  while (!queue.empty()) {
    const NavState s = queue.front();
    queue.pop_front();
    const std::size_t sk = key(s.pos, s.facing);
    for (Direction d : kDirections) {
      NavState t{s.pos, d};
      const Position q = s.pos + direction_delta(d);
      if (inside(q) && passable(q)) t.pos = q;
      const std::size_t tk = key(t.pos, t.facing);
      if (seen[tk]) continue;
      seen[tk] = 1;
      parent[tk] = sk;
      via[tk] = move_action(d);
      if (goal(t)) {
        std::vector<Action> path;
        for (std::size_t k = tk; k != root; k = parent[k]) path.push_back(via[k]);
        std::reverse(path.begin(), path.end());
        return path;
      }
      queue.push_back(t);
    }
  }
  return std::nullopt;
}

}  // namespace gridlab
