#include "doctest.h"
#include "gridlab/planning.hpp"

using namespace gridlab;

namespace {

// 5x5 board, '#' blocked.
struct Board {
  std::vector<std::string> rows;
  bool passable(Position p) const { return rows[p.row][p.col] != '#'; }
};

}  // namespace

TEST_CASE("start already satisfies the goal") {
  Board b{{"#####", "#...#", "#...#", "#...#", "#####"}};
  auto plan = plan_moves(5, 5, {{2, 2}, Direction::N}, [&](Position p) { return b.passable(p); },
                         [](const NavState& s) { return s.pos == Position{2, 2}; });
  REQUIRE(plan);
  CHECK(plan->empty());
  plan = plan_moves(5, 5, {{2, 2}, Direction::N}, [&](Position p) { return b.passable(p); },
                    [](const NavState& s) { return s.pos == Position{2, 2}; }, false);
  REQUIRE(plan);
  CHECK(plan->size() == 2);
}

TEST_CASE("turning happens through blocked moves") {
  Board b{{"#####", "#.#.#", "#...#", "#...#", "#####"}};
  auto plan = plan_moves(5, 5, {{1, 1}, Direction::S}, [&](Position p) { return b.passable(p); },
                         [](const NavState& s) { return s.facing == Direction::E && s.pos == Position{1, 1}; });
  REQUIRE(plan);
  CHECK(*plan == std::vector<Action>{Action::MoveE});
}

TEST_CASE("shortest path with N > S > E > W tie-break") {
  Board b{{"#####", "#...#", "#...#", "#...#", "#####"}};
  auto pass = [&](Position p) { return b.passable(p); };
  auto corner = [](const NavState& s) { return s.pos == Position{3, 3}; };
  auto plan = plan_moves(5, 5, {{1, 1}, Direction::N}, pass, corner);
  REQUIRE(plan);
  CHECK(*plan == std::vector<Action>{Action::MoveS, Action::MoveS, Action::MoveE, Action::MoveE});
  auto either = [](const NavState& s) { return s.pos == Position{2, 1} || s.pos == Position{2, 3}; };
  plan = plan_moves(5, 5, {{2, 2}, Direction::E}, pass, either);
  REQUIRE(plan);
  CHECK(*plan == std::vector<Action>{Action::MoveN});
  auto east_or_west = [](const NavState& s) { return s.pos == Position{1, 2} || s.pos == Position{3, 2}; };
  plan = plan_moves(5, 5, {{2, 2}, Direction::N}, pass, east_or_west);
  REQUIRE(plan);
  CHECK(*plan == std::vector<Action>{Action::MoveE});
}

TEST_CASE("unreachable goal") {
  Board b{{"#####", "#.#.#", "#.#.#", "#.#.#", "#####"}};
  auto plan = plan_moves(5, 5, {{1, 1}, Direction::N}, [&](Position p) { return b.passable(p); },
                         [](const NavState& s) { return s.pos == Position{3, 3}; });
  CHECK_FALSE(plan);
}
