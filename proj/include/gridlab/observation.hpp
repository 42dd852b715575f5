#pragma once

#include <deque>
#include <string>
#include <vector>

#include "gridlab/dynamics.hpp"
#include "gridlab/world_model.hpp"

namespace gridlab {

inline constexpr std::size_t kHistoryLength = 10;
inline constexpr std::size_t kRecentEventLines = 5;

struct StateVector {
  int step = 0;
  int energy = 0;
  int keys = 0;
  double score = 0.0;
  bool operator==(const StateVector&) const = default;
};

// Window rows hold one ASCII glyph per cell; the center is the agent glyph.
struct Window {
  std::vector<std::string> rows;
  int radius = 0;
  bool operator==(const Window&) const = default;
};

struct Observation {
  Window window;
  Direction facing = Direction::N;
  StateVector state;
  std::vector<std::string> available_actions;
  std::vector<std::string> history;
  std::vector<std::string> recent_events;
  std::string goal_text;
  bool operator==(const Observation&) const = default;
};

// Uses r + boost if a scan is pending and clears the flag. Latent cells
// render 'o', cells off the map '#'.
Window render_window(WorldState& world);

// Each non-center cell is replaced with probability eta: half the time by
// '?', otherwise by a uniform pick from ". # e k h R P". Returns the number
// of cells selected for corruption.
int corrupt(Window& window, double eta, RngStream& rng);

std::string goal_text(int keys_required);
std::vector<std::string> available_actions(const WorldState& world);

// Rolling action history and event lines seen by the agent.
class ObservationLog {
 public:
  void record(std::string action_token, const std::vector<Event>& events);
  const std::deque<std::string>& history() const { return history_; }
  const std::deque<std::string>& events() const { return events_; }

 private:
  std::deque<std::string> history_;
  std::deque<std::string> events_;
};

// Owns the observation-noise stream, keeping it separate from world dynamics.
class Observer {
 public:
  explicit Observer(const EpisodeConfig& config)
      : noise_rate_(config.noise_rate), noise_(config.seed, "noise") {}

  Observation observe(WorldState& world, const ObservationLog& log);
  const RngStream& noise_stream() const { return noise_; }

 private:
  double noise_rate_;
  RngStream noise_;
};

// Score shown without a trailing ".0" for whole numbers.
std::string format_score(double score);
std::string render_state_line(const StateVector& s);

// Goal line, OBSERVATION (partial, local), RECENT EVENTS,
// PREVIOUS ACTIONS (recent), AVAILABLE ACTIONS. ASCII agent glyphs unless
// `unicode` is set.
std::string render_text(const Observation& obs, bool unicode = false);

// Truth rows of the 3x3 neighbourhood (agent glyph at the center).
std::vector<std::string> local_truth_view(const WorldState& world);

}  // namespace gridlab
