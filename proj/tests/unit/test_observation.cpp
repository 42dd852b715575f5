#include <fstream>
#include <sstream>

#include "doctest.h"
#include "gridlab/errors.hpp"
#include "gridlab/observation.hpp"
#include "helpers.hpp"

using namespace gridlab;
using gridlab::testing::quiet_config;
using gridlab::testing::world_from_rows;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Observation fixture_observation() {
  Observation o;
  o.window = {{"#####", "#.k.h", "#.>R.", "#?..e", "##.#o"}, 2};
  o.facing = Direction::E;
  o.state = {37, 4, 0, -6.0};
  o.available_actions = {"MOVE_N", "MOVE_S", "MOVE_E", "MOVE_W", "INTERACT", "SCAN", "MEASURE"};
  o.history = {"SCAN", "MOVE_E", "MOVE_E"};
  o.recent_events = {"[step 36] MOVE_E succeeded", "[step 37] MOVE_E succeeded", "[step 37] ENV SHIFT -> STORM"};
  o.goal_text = goal_text(3);
  return o;
}

const std::vector<std::string> kMap = {
    "#########",
    "#.......#",
    "#.k..o..#",
    "#...h...#",
    "#..R....#",
    "#.......#",
    "#...e...#",
    "#.......#",
    "#########",
};

}  // namespace

TEST_CASE("window size and scan boost") {
  auto w = world_from_rows(kMap, {4, 4}, Direction::N, quiet_config());
  auto win = render_window(w);
  CHECK(win.radius == 2);
  CHECK(win.rows.size() == 5);
  for (const auto& r : win.rows) CHECK(r.size() == 5);
  CHECK(win.rows[2][2] == '^');
  CHECK(win.rows[0] == "k..o.");
  CHECK(win.rows[1] == "..h..");
  CHECK(win.rows[2] == ".R^..");
  w.scan_boost_pending = true;
  win = render_window(w);
  CHECK(win.rows.size() == 9);
  CHECK(win.radius == 4);
  CHECK_FALSE(w.scan_boost_pending);
  CHECK(render_window(w).rows.size() == 5);
}

TEST_CASE("consecutive scans boost each following observation") {
  EpisodeConfig c = quiet_config();
  auto w = world_from_rows(kMap, {4, 4}, Direction::N, c);
  Observer obs(c);
  ObservationLog log;
  step(w, Action::Scan);
  CHECK(obs.observe(w, log).window.rows.size() == 9);
  step(w, Action::Scan);
  CHECK(obs.observe(w, log).window.rows.size() == 9);
  step(w, Action::MoveN);
  CHECK(obs.observe(w, log).window.rows.size() == 5);
  w.energy = 1;
  step(w, Action::Scan);
  CHECK(obs.observe(w, log).window.rows.size() == 5);
}

TEST_CASE("out-of-map cells render as walls") {
  auto w = world_from_rows(kMap, {1, 1}, Direction::W, quiet_config());
  const auto win = render_window(w);
  CHECK(win.rows[0] == "#####");
  CHECK(win.rows[1] == "#####");
  CHECK(win.rows[2] == "##<..");
}

TEST_CASE("latent cells render as o") {
  auto w = world_from_rows(kMap, {5, 3}, Direction::S, quiet_config());
  CHECK(render_window(w).rows[1][2] == 'o');
}

TEST_CASE("corrupt") {
  const Window base{{"#####", "#.k.h", "#.^R.", "#...e", "##.#o"}, 2};
  SUBCASE("eta 0 is the identity") {
    Window w = base;
    RngStream rng(1, "noise");
    CHECK(corrupt(w, 0.0, rng) == 0);
    CHECK(w == base);
  }
  SUBCASE("eta 1 corrupts every non-center cell") {
    Window w = base;
    RngStream rng(1, "noise");
    CHECK(corrupt(w, 1.0, rng) == 24);
    CHECK(w.rows[2][2] == '^');
    const std::string allowed = "?.#ekhRP";
    for (int r = 0; r < 5; ++r)
      for (int c = 0; c < 5; ++c)
        if (r != 2 || c != 2) CHECK(allowed.find(w.rows[r][c]) != std::string::npos);
  }
  SUBCASE("eta 0.2 corrupts 4.8 cells on average") {
    RngStream rng(2, "noise");
    long total = 0;
    int question = 0;
    for (int i = 0; i < 10000; ++i) {
      Window w = base;
      total += corrupt(w, 0.2, rng);
      for (const auto& row : w.rows) question += static_cast<int>(std::count(row.begin(), row.end(), '?'));
    }
    CHECK(std::abs(total / 10000.0 - 4.8) <= 0.15);
    CHECK(std::abs(static_cast<double>(question) / total - 0.5) <= 0.02);
  }
  SUBCASE("eta outside [0,1]") {
    Window w = base;
    RngStream rng(1, "noise");
    CHECK_THROWS_AS(corrupt(w, 1.5, rng), ContractViolation);
  }
}

TEST_CASE("rendering never mutates the world") {
  EpisodeConfig c;
  c.noise_rate = 0.5;
  c.seed = 4;
  auto w = generate_map(c).world;
  Observer obs(c);
  ObservationLog log;
  const auto h = world_hash(w);
  for (int i = 0; i < 10; ++i) obs.observe(w, log);
  CHECK(world_hash(w) == h);
}

TEST_CASE("noise uses its own stream") {
  EpisodeConfig quiet = quiet_config();
  EpisodeConfig noisy = quiet;
  noisy.noise_rate = 0.3;
  quiet.seed = noisy.seed = 8;
  auto a = generate_map(quiet).world;
  auto b = generate_map(noisy).world;
  Observer oa(quiet), ob(noisy);
  ObservationLog la, lb;
  for (int i = 0; i < 30; ++i) {
    oa.observe(a, la);
    ob.observe(b, lb);
    step(a, Action::MoveE);
    step(b, Action::MoveE);
    CHECK(world_hash(a) == world_hash(b));
  }
}

TEST_CASE("history and event windows are bounded") {
  ObservationLog log;
  for (int i = 1; i <= 30; ++i) {
    log.record("SCAN", {{EventKind::ScanUsed, i, {}}, {EventKind::EnvShift, i, "STORM"}});
    CHECK(log.history().size() <= 10);
    CHECK(log.events().size() <= 5);
  }
  CHECK(log.history().size() == 10);
  CHECK(log.events().back() == "[step 30] ENV SHIFT -> STORM");
}

TEST_CASE("available actions hide MEASURE without latents") {
  auto w = world_from_rows(kMap, {4, 4}, Direction::N, quiet_config());
  auto acts = available_actions(w);
  CHECK(acts.size() == 6);
  CHECK(std::find(acts.begin(), acts.end(), "MEASURE") == acts.end());
  w.config.latent_fraction = 0.1;
  acts = available_actions(w);
  CHECK(acts.back() == "MEASURE");
}

TEST_CASE("render_text") {
  const Observation o = fixture_observation();
  const std::string text = render_text(o);
  SUBCASE("golden") { CHECK(text == read_file(GRIDLAB_FIXTURES "/observation_golden.txt")); }
  SUBCASE("state line") {
    CHECK(text.find("Step: 37") != std::string::npos);
    CHECK(text.find("Energy: 4") != std::string::npos);
    CHECK(text.find("Score: -6") != std::string::npos);
    CHECK(render_state_line({37, 4, 0, -6.0}) == "Step: 37 | Energy: 4 | Keys: 0 | Score: -6");
  }
  SUBCASE("section order") {
    const auto goal = text.find("Collect 3 key fragments");
    const auto obs = text.find("OBSERVATION (partial, local):");
    const auto events = text.find("RECENT EVENTS:");
    const auto prev = text.find("PREVIOUS ACTIONS (recent):");
    const auto avail = text.find("AVAILABLE ACTIONS:");
    CHECK(goal < obs);
    CHECK(obs < events);
    CHECK(events < prev);
    CHECK(prev < avail);
  }
  SUBCASE("unicode agent glyph") {
    CHECK(render_text(o, true).find("#.\xE2\x96\xB6R.") != std::string::npos);
  }
  SUBCASE("empty history keeps the header") {
    Observation e = o;
    e.history.clear();
    CHECK(render_text(e).find("PREVIOUS ACTIONS (recent):\n\nAVAILABLE ACTIONS:") != std::string::npos);
  }
}

TEST_CASE("3x3 truth view") {
  auto w = world_from_rows(kMap, {4, 4}, Direction::E, quiet_config());
  CHECK(local_truth_view(w) == std::vector<std::string>{".h.", "R>.", "..."});
  CHECK(format_score(-6.0) == "-6");
  CHECK(format_score(2.5) == "2.5");
}
