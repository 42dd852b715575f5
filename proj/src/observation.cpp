#include "gridlab/observation.hpp"

#include <array>

#include <fmt/format.h>

#include "gridlab/errors.hpp"

namespace gridlab {

namespace {

constexpr std::array<char, 7> kSubstituteGlyphs = {'.', '#', 'e', 'k', 'h', 'R', 'P'};

std::vector<std::string> extract(const WorldState& w, int radius) {
  std::vector<std::string> rows;
  rows.reserve(static_cast<std::size_t>(2 * radius + 1));
  for (int dr = -radius; dr <= radius; ++dr) {
    std::string row;
    for (int dc = -radius; dc <= radius; ++dc) {
      const Position p{w.agent.col + dc, w.agent.row + dr};
      if (dr == 0 && dc == 0) {
        row += agent_glyph_ascii(w.facing);
      } else if (!w.grid.in_bounds(p)) {
        row += '#';
      } else {
        row += tile_glyph(w.grid.at(p));
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

template <typename Seq>
std::string join(const Seq& items, std::string_view sep) {
  std::string out;
  bool first = true;
  for (const auto& s : items) {
    if (!first) out += sep;
    out += s;
    first = false;
  }
  return out;
}

}  // namespace

Window render_window(WorldState& world) {
  int radius = world.config.obs_radius;
  if (world.scan_boost_pending) {
    radius += world.config.scan_radius_boost;
    world.scan_boost_pending = false;
  }
  return {extract(world, radius), radius};
}

int corrupt(Window& window, double eta, RngStream& rng) {
  require(eta >= 0.0 && eta <= 1.0, "corrupt: eta must lie in [0,1]");
  if (eta == 0.0) return 0;
  const int n = static_cast<int>(window.rows.size());
  const int center = n / 2;
  int corrupted = 0;
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      if (r == center && c == center) continue;
      if (!rng.bernoulli(eta)) continue;
      ++corrupted;
      char& cell = window.rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
      cell = rng.bernoulli(0.5) ? '?' : kSubstituteGlyphs[rng.below(kSubstituteGlyphs.size())];
    }
  }
  return corrupted;
}

std::string goal_text(int keys_required) {
  return fmt::format(
      "Collect {} key fragments (k), then open the exit door (D) by INTERACTing with it while "
      "facing it.",
      keys_required);
}

std::vector<std::string> available_actions(const WorldState& world) {
  std::vector<std::string> out;
  for (Action a : kAllActions) {
    if (a == Action::Measure && !world.measure_enabled()) continue;
    out.emplace_back(action_token(a));
  }
  return out;
}

void ObservationLog::record(std::string action_token, const std::vector<Event>& events) {
  history_.push_back(std::move(action_token));
  while (history_.size() > kHistoryLength) history_.pop_front();
  for (const Event& e : events) {
    events_.push_back(fmt::format("[step {}] {}", e.step, describe_event(e)));
  }
  while (events_.size() > kRecentEventLines) events_.pop_front();
}

Observation Observer::observe(WorldState& world, const ObservationLog& log) {
  Observation obs;
  obs.window = render_window(world);
  corrupt(obs.window, noise_rate_, noise_);
  obs.facing = world.facing;
  obs.state = {world.step, world.energy, world.keys, world.score};
  obs.available_actions = available_actions(world);
  obs.history.assign(log.history().begin(), log.history().end());
  obs.recent_events.assign(log.events().begin(), log.events().end());
  obs.goal_text = goal_text(world.config.keys_required);
  return obs;
}

std::string format_score(double score) { return fmt::format("{}", score); }

std::string render_state_line(const StateVector& s) {
  return fmt::format("Step: {} | Energy: {} | Keys: {} | Score: {}", s.step, s.energy, s.keys,
                     format_score(s.score));
}

std::string render_text(const Observation& obs, bool unicode) {
  std::string out;
  out += obs.goal_text;
  out += "\n\nOBSERVATION (partial, local):\n";
  out += render_state_line(obs.state);
  out += '\n';
  const std::size_t center = obs.window.rows.size() / 2;
  for (std::size_t r = 0; r < obs.window.rows.size(); ++r) {
    const std::string& row = obs.window.rows[r];
    if (unicode && r == center) {
      out += row.substr(0, center);
      out += agent_glyph_unicode(obs.facing);
      out += row.substr(center + 1);
    } else {
      out += row;
    }
    out += '\n';
  }
  out += "\nRECENT EVENTS:\n";
  for (const auto& e : obs.recent_events) {
    out += e;
    out += '\n';
  }
  out += "\nPREVIOUS ACTIONS (recent):\n";
  if (!obs.history.empty()) {
    out += join(obs.history, ", ");
    out += '\n';
  }
  out += "\nAVAILABLE ACTIONS:\n";
  out += join(obs.available_actions, ", ");
  out += '\n';
  return out;
}

std::vector<std::string> local_truth_view(const WorldState& world) {
  return extract(world, 1);
}

}  // namespace gridlab
