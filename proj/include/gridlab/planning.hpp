#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "gridlab/world_model.hpp"

namespace gridlab {

struct NavState {
  Position pos;
  Direction facing = Direction::N;
};

using CellPredicate = std::function<bool(Position)>;
using GoalPredicate = std::function<bool(const NavState&)>;

// Breadth-first search over (position, facing) on a width x height board.
// A move sets facing and advances only when the target is passable, so
// "turning" happens through blocked moves. Expansion order N, S, E, W makes
// the returned plan the shortest one, ties broken toward N > S > E > W on
// the earliest differing move.
//
// Returns the move sequence to the first goal state; an empty sequence means
// the start already satisfies the goal (only checked when start_counts).
std::optional<std::vector<Action>> plan_moves(int width, int height, NavState start,
                                              const CellPredicate& passable,
                                              const GoalPredicate& goal, bool start_counts = true);

}  // namespace gridlab
