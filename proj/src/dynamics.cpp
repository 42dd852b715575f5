#include "gridlab/dynamics.hpp"

#include <algorithm>
#include <array>
#include <utility>

#include <fmt/format.h>

#include "gridlab/errors.hpp"

namespace gridlab {

namespace {

constexpr std::array<std::pair<EventKind, std::string_view>, 22> kEventNames = {{
    {EventKind::MoveOk, "MOVE_OK"},
    {EventKind::MoveSlip, "MOVE_SLIP"},
    {EventKind::Blocked, "BLOCKED"},
    {EventKind::KeyPickup, "KEY_PICKUP"},
    {EventKind::EnergyPickup, "ENERGY_PICKUP"},
    {EventKind::HazardHit, "HAZARD_HIT"},
    {EventKind::DoorOpened, "DOOR_OPENED"},
    {EventKind::DoorLocked, "DOOR_LOCKED"},
    {EventKind::RuleTriggered, "RULE_TRIGGERED"},
    {EventKind::RuleOutcome, "RULE_OUTCOME"},
    {EventKind::HazardNeutralized, "HAZARD_NEUTRALIZED"},
    {EventKind::NeutralizeFailed, "NEUTRALIZE_FAILED"},
    {EventKind::ScanUsed, "SCAN_USED"},
    {EventKind::MeasureUsed, "MEASURE_USED"},
    {EventKind::InsufficientEnergy, "INSUFFICIENT_ENERGY"},
    {EventKind::EnvShift, "ENV_SHIFT"},
    {EventKind::Teleport, "TELEPORT"},
    {EventKind::HazardSpread, "HAZARD_SPREAD"},
    {EventKind::Drift, "DRIFT"},
    {EventKind::InvalidAction, "INVALID_ACTION"},
    {EventKind::Timeout, "TIMEOUT"},
    {EventKind::AgentError, "AGENT_ERROR"},
}};

void spend(WorldState& w, int cost) { w.energy = std::max(0, w.energy - cost); }

void push(WorldState& w, std::vector<Event>& events, EventKind k, std::string detail = {}) {
  events.push_back({k, w.step, std::move(detail)});
}

bool is_failure(EventKind k) {
  switch (k) {
    case EventKind::MoveSlip:
    case EventKind::Blocked:
    case EventKind::DoorLocked:
    case EventKind::NeutralizeFailed:
    case EventKind::InsufficientEnergy:
    case EventKind::InvalidAction:
      return true;
    default:
      return false;
  }
}

StepResult advance(WorldState& w, std::optional<Action> action, std::string invalid_detail) {
  require(w.outcome == Outcome::Running, "step: world has already terminated");
  const int energy_before = w.energy;
  StepResult r;
  ++w.step;

  if (!action) {
    push(w, r.events, EventKind::InvalidAction, std::move(invalid_detail));
  } else if (auto d = move_direction(*action)) {
    apply_move(w, *d, r.events);
  } else if (*action == Action::Interact) {
    apply_interact(w, r.events);
  } else if (*action == Action::Scan) {
    apply_scan(w, r.events);
  } else {
    apply_measure(w, r.events);
  }
  const std::size_t action_events = r.events.size();

  if (w.outcome != Outcome::ExitSuccess) {
    spread_hazards(w, r.events);
    const auto& c = w.config;
    if (c.shift_interval && w.step % *c.shift_interval == 0) weather_shift(w, r.events);
    if (c.teleport_interval && w.step % *c.teleport_interval == 0) teleport(w, r.events);
    if (c.drift_step && w.step == *c.drift_step) drift(w, r.events);
    if (w.step >= c.step_budget) {
      w.outcome = Outcome::Timeout;
      push(w, r.events, EventKind::Timeout);
    }
  }

  r.action_succeeded = std::none_of(r.events.begin(), r.events.begin() + static_cast<long>(action_events),
                                    [](const Event& e) { return is_failure(e.kind); });
  double delta = -w.config.score_step;
  for (const Event& e : r.events) delta += event_score(e.kind, w.config);
  w.score += delta;
  r.reward_delta = delta;
  r.energy_delta = w.energy - energy_before;
  r.terminated = w.outcome;
  return r;
}

}  // namespace

std::string_view event_name(EventKind k) {
  for (const auto& [kind, name] : kEventNames) {
    if (kind == k) return name;
  }
  return "";
}

std::optional<EventKind> event_from_name(std::string_view s) {
  for (const auto& [kind, name] : kEventNames) {
    if (name == s) return kind;
  }
  return std::nullopt;
}

double event_score(EventKind k, const EpisodeConfig& c) {
  switch (k) {
    case EventKind::KeyPickup: return c.score_key;
    case EventKind::DoorOpened: return c.score_exit;
    case EventKind::HazardHit: return -c.score_hazard;
    default: return 0.0;
  }
}

std::string describe_event(const Event& e) {
  switch (e.kind) {
    case EventKind::MoveOk: return fmt::format("{} succeeded", e.detail);
    case EventKind::MoveSlip: return "MOVE failed (slip)";
    case EventKind::Blocked: return fmt::format("{} blocked", e.detail);
    case EventKind::KeyPickup: return "picked up a key fragment";
    case EventKind::EnergyPickup: return "gained energy";
    case EventKind::HazardHit: return "stepped on a hazard (penalty)";
    case EventKind::DoorOpened: return "door opened";
    case EventKind::DoorLocked: return "door is locked";
    case EventKind::RuleTriggered: return "rule tile triggered";
    case EventKind::RuleOutcome: return fmt::format("rule tile became {}", e.detail);
    case EventKind::HazardNeutralized: return "hazard neutralized";
    case EventKind::NeutralizeFailed: return "hazard neutralization failed";
    case EventKind::ScanUsed: return "SCAN succeeded";
    case EventKind::MeasureUsed: return fmt::format("MEASURE collapsed {} cell(s)", e.detail);
    case EventKind::InsufficientEnergy: return fmt::format("{} failed (insufficient energy)", e.detail);
    case EventKind::EnvShift: return fmt::format("ENV SHIFT -> {}", e.detail);
    case EventKind::Teleport: return "TELEPORT to pad";
    case EventKind::HazardSpread: return "hazard spread nearby";
    case EventKind::Drift: return "DRIFT: agent dynamics changed";
    case EventKind::InvalidAction: return "invalid action";
    case EventKind::Timeout: return "step budget exhausted";
    case EventKind::AgentError: return fmt::format("agent error: {}", e.detail);
  }
  return "";
}

StepResult step(WorldState& world, Action action) {
  if (action == Action::Measure && !world.measure_enabled()) {
    return advance(world, std::nullopt, "MEASURE");
  }
  return advance(world, action, {});
}

StepResult step_invalid(WorldState& world, std::string detail) {
  return advance(world, std::nullopt, std::move(detail));
}

double effective_slip(const WorldState& w) {
  const auto& c = w.config;
  double p = c.move_fail;
  if (w.weather == WeatherMode::Storm) p += c.storm_slip;
  if (w.energy <= c.low_energy_threshold) p *= c.low_energy_slip_factor;
  if (w.drift_active) p += c.drift_slip;
  return std::clamp(p, 0.0, c.slip_cap);
}

Event apply_move(WorldState& w, Direction d, std::vector<Event>& events) {
  const std::string token(action_token(move_action(d)));
  w.facing = d;
  if (w.dynamics.bernoulli(effective_slip(w))) {
    push(w, events, EventKind::MoveSlip, token);
    return events.back();
  }
  const Position target = w.agent + direction_delta(d);
  const Tile t = w.grid.at(target);
  if (t == Tile::Wall || t == Tile::Door) {
    push(w, events, EventKind::Blocked, token);
    return events.back();
  }
  w.agent = target;
  if (w.weather == WeatherMode::Storm) spend(w, 1);
  push(w, events, EventKind::MoveOk, token);
  const Event moved = events.back();
  switch (t) {
    case Tile::Key:
      ++w.keys;
      w.grid.set(target, Tile::Empty);
      push(w, events, EventKind::KeyPickup);
      break;
    case Tile::Energy:
      w.energy += w.config.energy_gain;
      w.grid.set(target, Tile::Empty);
      push(w, events, EventKind::EnergyPickup);
      break;
    case Tile::Hazard:
      push(w, events, EventKind::HazardHit);
      break;
    default:
      break;
  }
  return moved;
}

bool hazard_adjacent(const Grid& grid, Position p) {
  for (Direction d : kDirections) {
    const Position q = p + direction_delta(d);
    if (grid.in_bounds(q) && grid.at(q) == Tile::Hazard) return true;
  }
  return false;
}

Tile rule_tile_outcome(int energy, bool adjacent_hazard, int energy_high, RngStream& rng) {
  if (energy >= energy_high) return rng.bernoulli(0.5) ? Tile::Key : Tile::Empty;
  if (adjacent_hazard) return Tile::Hazard;
  return Tile::Empty;
}

void apply_interact(WorldState& w, std::vector<Event>& events) {
  const auto& c = w.config;
  const Position target = w.agent + direction_delta(w.facing);
  const int energy_at_interaction = w.energy;
  spend(w, c.interact_cost);
  switch (w.grid.at(target)) {
    case Tile::Door:
      if (w.keys >= c.keys_required) {
        push(w, events, EventKind::DoorOpened);
        w.outcome = Outcome::ExitSuccess;
      } else {
        push(w, events, EventKind::DoorLocked);
      }
      break;
    case Tile::Rule: {
      push(w, events, EventKind::RuleTriggered);
      const Tile out = rule_tile_outcome(energy_at_interaction, hazard_adjacent(w.grid, target),
                                         c.energy_high, w.dynamics);
      w.grid.set(target, out);
      push(w, events, EventKind::RuleOutcome, std::string(1, tile_glyph(out)));
      break;
    }
    case Tile::Hazard:
      if (w.energy >= c.neutralize_cost) {
        spend(w, c.neutralize_cost);
        if (w.dynamics.bernoulli(c.neutralize_success_p)) {
          w.grid.set(target, Tile::Empty);
          push(w, events, EventKind::HazardNeutralized);
        } else {
          push(w, events, EventKind::NeutralizeFailed);
        }
      } else {
        push(w, events, EventKind::InsufficientEnergy, "INTERACT");
      }
      break;
    default:
      break;
  }
}

void apply_scan(WorldState& w, std::vector<Event>& events) {
  if (w.energy >= w.scan_cost) {
    spend(w, w.scan_cost);
    w.scan_boost_pending = true;
    push(w, events, EventKind::ScanUsed);
  } else {
    push(w, events, EventKind::InsufficientEnergy, "SCAN");
  }
}

Tile sample_collapse(RngStream& rng) {
  const double u = rng.uniform01();
  if (u < 0.40) return Tile::Empty;
  if (u < 0.65) return Tile::Hazard;
  if (u < 0.80) return Tile::Energy;
  if (u < 0.90) return Tile::Rule;
  return Tile::Key;
}

void apply_measure(WorldState& w, std::vector<Event>& events) {
  if (!w.measure_enabled()) {
    push(w, events, EventKind::InvalidAction, "MEASURE");
    return;
  }
  if (w.energy < w.measure_cost) {
    push(w, events, EventKind::InsufficientEnergy, "MEASURE");
    return;
  }
  spend(w, w.measure_cost);
  const int rad = w.config.measure_radius;
  int collapsed = 0;
  for (int r = w.agent.row - rad; r <= w.agent.row + rad; ++r) {
    for (int c = w.agent.col - rad; c <= w.agent.col + rad; ++c) {
      const Position p{c, r};
      if (!w.grid.in_bounds(p) || w.grid.at(p) != Tile::Latent) continue;
      w.grid.set(p, sample_collapse(w.collapse));
      ++collapsed;
    }
  }
  push(w, events, EventKind::MeasureUsed, std::to_string(collapsed));
}

void spread_hazards(WorldState& w, std::vector<Event>& events) {
  const double p = w.config.hazard_spread_p;
  if (p <= 0.0) return;
  const auto hazards = w.grid.find_all(Tile::Hazard);
  for (Position h : hazards) {
    if (!w.dynamics.bernoulli(p)) continue;
    const Position q = h + direction_delta(kDirections[w.dynamics.below(4)]);
    if (w.grid.in_bounds(q) && w.grid.at(q) == Tile::Empty) {
      w.grid.set(q, Tile::Hazard);
      push(w, events, EventKind::HazardSpread, fmt::format("{},{}", q.col, q.row));
    }
  }
}

void weather_shift(WorldState& w, std::vector<Event>& events) {
  w.weather = w.weather == WeatherMode::Calm ? WeatherMode::Storm : WeatherMode::Calm;
  push(w, events, EventKind::EnvShift, w.weather == WeatherMode::Storm ? "STORM" : "CALM");
}

void teleport(WorldState& w, std::vector<Event>& events) {
  w.agent = w.pad;
  push(w, events, EventKind::Teleport);
}

void drift(WorldState& w, std::vector<Event>& events) {
  w.drift_active = true;
  w.scan_cost += 1;
  w.measure_cost += 1;
  push(w, events, EventKind::Drift);
}

}  // namespace gridlab
