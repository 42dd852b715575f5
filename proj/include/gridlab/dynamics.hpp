#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gridlab/world_model.hpp"

namespace gridlab {

enum class EventKind : std::uint8_t {
  MoveOk,
  MoveSlip,
  Blocked,
  KeyPickup,
  EnergyPickup,
  HazardHit,
  DoorOpened,
  DoorLocked,
  RuleTriggered,
  RuleOutcome,
  HazardNeutralized,
  NeutralizeFailed,
  ScanUsed,
  MeasureUsed,
  InsufficientEnergy,
  EnvShift,
  Teleport,
  HazardSpread,
  Drift,
  InvalidAction,
  Timeout,
  AgentError,
};

// Stable serialized names (MOVE_OK, ENV_SHIFT, ...). Part of the trajectory format.
std::string_view event_name(EventKind k);
std::optional<EventKind> event_from_name(std::string_view s);

// detail carries the kind-specific payload: the move token for moves, the
// outcome glyph for RULE_OUTCOME, "CALM"/"STORM" for ENV_SHIFT, "col,row"
// for HAZARD_SPREAD, the collapse count for MEASURE_USED.
struct Event {
  EventKind kind = EventKind::MoveOk;
  int step = 0;
  std::string detail;
  bool operator==(const Event&) const = default;
};

// Score contribution of a single event under the config's constants.
double event_score(EventKind k, const EpisodeConfig& c);

// Human-readable line, e.g. "MOVE_E succeeded", "MOVE failed (slip)", "ENV SHIFT -> STORM".
std::string describe_event(const Event& e);

struct StepResult {
  std::vector<Event> events;
  // Sum of event_score over events, minus the per-step cost.
  double reward_delta = 0.0;
  int energy_delta = 0;
  Outcome terminated = Outcome::Running;
  bool action_succeeded = false;
};

// Advances the world by one step: the action, then hazard spread, weather
// shift, teleport and drift (skipped on the step the door opens), then the
// timeout check. Throws ContractViolation if the world has already ended.
StepResult step(WorldState& world, Action action);
// A step consumed by an unparseable or unavailable action.
StepResult step_invalid(WorldState& world, std::string detail);

Event apply_move(WorldState& world, Direction d, std::vector<Event>& events);
double effective_slip(const WorldState& world);
void apply_interact(WorldState& world, std::vector<Event>& events);
Tile rule_tile_outcome(int energy, bool hazard_adjacent, int energy_high, RngStream& rng);
void apply_scan(WorldState& world, std::vector<Event>& events);
void apply_measure(WorldState& world, std::vector<Event>& events);
void spread_hazards(WorldState& world, std::vector<Event>& events);
void weather_shift(WorldState& world, std::vector<Event>& events);
void teleport(WorldState& world, std::vector<Event>& events);
void drift(WorldState& world, std::vector<Event>& events);

bool hazard_adjacent(const Grid& grid, Position p);

// Collapse distribution for latent cells: Empty .40, Hazard .25, Energy .15, Rule .10, Key .10.
Tile sample_collapse(RngStream& rng);

}  // namespace gridlab
