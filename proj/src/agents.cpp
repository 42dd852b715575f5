#include "gridlab/agents.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "gridlab/errors.hpp"
#include "gridlab/planning.hpp"

namespace gridlab {

Decision decision_for(Action a) { return {a, std::string(action_token(a)), DecisionStatus::Ok, {}}; }

// ---------------------------------------------------------------------------
// Random

bool RandomAgent::begin_episode(const EpisodeInfo& info) {
  rng_ = RngStream(info.seed, "agent");
  return true;
}

Decision RandomAgent::decide(const DecisionContext& ctx) {
  const auto& actions = ctx.observation.available_actions;
  require(!actions.empty(), "RandomAgent: no available actions");
  const auto& token = actions[rng_.below(actions.size())];
  return decision_for(*parse_action_token(token));
}

// ---------------------------------------------------------------------------
// Oracle

bool OracleAgent::begin_episode(const EpisodeInfo&) {
  gave_up_ = false;
  return true;
}

Decision OracleAgent::decide(const DecisionContext& ctx) {
  require(ctx.truth != nullptr, "OracleAgent needs the ground-truth world");
  const WorldState& w = *ctx.truth;
  const Grid& g = w.grid;
  const int n = g.size();
  const auto& cfg = w.config;

  auto route = [&](const GoalPredicate& goal, bool start_counts) {
    auto blocks = [&](Position p, bool allow_hazard) {
      const Tile t = g.at(p);
      return t == Tile::Wall || t == Tile::Door || (!allow_hazard && t == Tile::Hazard);
    };
    const NavState start{w.agent, w.facing};
    auto plan = plan_moves(n, n, start, [&](Position p) { return !blocks(p, false); }, goal, start_counts);
    if (!plan) plan = plan_moves(n, n, start, [&](Position p) { return !blocks(p, true); }, goal, start_counts);
    return plan;
  };
  auto facing = [&](Tile target) {
    return [&g, target](const NavState& s) {
      const Position f = s.pos + direction_delta(s.facing);
      return g.in_bounds(f) && g.at(f) == target && f != s.pos;
    };
  };
  auto onto = [&](Tile target) { return [&g, target](const NavState& s) { return g.at(s.pos) == target; }; };
  // Empty plan means "already there": perform `act`.
  auto follow = [](const std::vector<Action>& plan, Action act) {
    return decision_for(plan.empty() ? act : plan.front());
  };

  if (w.keys >= cfg.keys_required) {
    if (auto plan = route(facing(Tile::Door), true)) return follow(*plan, Action::Interact);
    gave_up_ = true;
    return decision_for(Action::Interact);
  }
  if (auto plan = route(onto(Tile::Key), false)) return follow(*plan, Action::Interact);

  const bool has_rules = g.count(Tile::Rule) > 0;
  if (has_rules) {
    if (w.energy < cfg.energy_high) {
      if (auto plan = route(onto(Tile::Energy), false)) return follow(*plan, Action::Interact);
    }
    if (auto plan = route(facing(Tile::Rule), true)) return follow(*plan, Action::Interact);
  }
  if (w.measure_enabled() && g.count(Tile::Latent) > 0) {
    if (w.energy < w.measure_cost) {
      if (auto plan = route(onto(Tile::Energy), false)) return follow(*plan, Action::Interact);
    }
    const auto latents = g.find_all(Tile::Latent);
    const int radius = cfg.measure_radius;
    auto near_latent = [&](const NavState& s) {
      return std::any_of(latents.begin(), latents.end(),
                         [&](Position l) { return chebyshev(l, s.pos) <= radius; });
    };
    if (auto plan = route(near_latent, true)) return follow(*plan, Action::Measure);
  }
  gave_up_ = true;
  return decision_for(Action::Interact);
}

// ---------------------------------------------------------------------------
// Sense-then-act

namespace {

bool walkable_glyph(char c) {
  return c == '.' || c == 'k' || c == 'e' || c == 'R' || c == 'P' || c == 'o';
}

}  // namespace

bool SenseThenActAgent::begin_episode(const EpisodeInfo& info) {
  info_ = info;
  extent_ = 2 * info.grid_size + 1;
  reset_memory();
  decisions_ = 0;
  scanned_last_ = false;
  assumed_scan_cost_ = opt_.scan_cost;
  assumed_measure_cost_ = opt_.measure_cost;
  rng_ = RngStream(info.seed, "agent");
  return true;
}

void SenseThenActAgent::reset_memory() {
  memory_.assign(static_cast<std::size_t>(extent_ * extent_), '?');
  pos_ = {info_.grid_size, info_.grid_size};
  pad_.reset();
}

char& SenseThenActAgent::cell(Position p) {
  return memory_[static_cast<std::size_t>(p.row * extent_ + p.col)];
}

char SenseThenActAgent::cell(Position p) const {
  if (p.col < 0 || p.row < 0 || p.col >= extent_ || p.row >= extent_) return '#';
  return memory_[static_cast<std::size_t>(p.row * extent_ + p.col)];
}

char SenseThenActAgent::remembered(int dcol, int drow) const {
  return cell(Position{pos_.col + dcol, pos_.row + drow});
}

bool SenseThenActAgent::known_passable(Position p) const { return walkable_glyph(cell(p)); }

void SenseThenActAgent::track_motion(const std::vector<Event>& events) {
  for (const Event& e : events) {
    if (e.kind == EventKind::MoveOk || e.kind == EventKind::Blocked) {
      const auto a = parse_action_token(e.detail);
      if (!a || !move_direction(*a)) continue;
      const Position target = pos_ + direction_delta(*move_direction(*a));
      if (e.kind == EventKind::MoveOk) {
        pos_ = target;
      } else if (cell(target) != 'D' && cell(target) != '#') {
        if (target.col >= 0 && target.row >= 0 && target.col < extent_ && target.row < extent_) {
          cell(target) = '#';
        }
      }
    } else if (e.kind == EventKind::Teleport) {
      if (pad_) {
        pos_ = *pad_;
      } else {
        reset_memory();
      }
    } else if (e.kind == EventKind::Drift) {
      ++assumed_scan_cost_;
      ++assumed_measure_cost_;
    }
  }
}

void SenseThenActAgent::integrate(const Observation& obs) {
  const int r = obs.window.radius;
  for (int i = 0; i < static_cast<int>(obs.window.rows.size()); ++i) {
    for (int j = 0; j < static_cast<int>(obs.window.rows[static_cast<std::size_t>(i)].size()); ++j) {
      const Position p{pos_.col + j - r, pos_.row + i - r};
      if (p.col < 0 || p.row < 0 || p.col >= extent_ || p.row >= extent_) continue;
      const char g = obs.window.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (i == r && j == r) {
        char& here = cell(p);
        if (here == '?' || here == 'k' || here == 'e' || here == '#' || here == 'D') here = '.';
        continue;
      }
      if (g == '?') continue;
      cell(p) = g;
      if (g == 'P' && !pad_) pad_ = p;
    }
  }
}

std::optional<Action> SenseThenActAgent::navigate(const std::function<bool(const NavState&)>& goal,
                                                  bool start_counts) const {
  const NavState start{pos_, facing_};
  auto plan = plan_moves(extent_, extent_, start, [&](Position p) { return known_passable(p); }, goal,
                         start_counts);
  if (!plan) {
    plan = plan_moves(extent_, extent_, start,
                      [&](Position p) { return known_passable(p) || cell(p) == 'h'; }, goal,
                      start_counts);
  }
  if (!plan) return std::nullopt;
  if (plan->empty()) return Action::Interact;  // caller maps "arrived" to its own action
  return plan->front();
}

int SenseThenActAgent::frontier_unknown_percent() const {
  const int rad = info_.obs_radius + opt_.scan_radius_boost;
  int unknown = 0;
  int total = 0;
  for (int dr = -rad; dr <= rad; ++dr) {
    for (int dc = -rad; dc <= rad; ++dc) {
      if (dr == 0 && dc == 0) continue;
      ++total;
      unknown += remembered(dc, dr) == '?';
    }
  }
  return total == 0 ? 0 : unknown * 100 / total;
}

Decision SenseThenActAgent::decide(const DecisionContext& ctx) {
  const Observation& obs = ctx.observation;
  track_motion(ctx.last_events);
  facing_ = obs.facing;
  integrate(obs);
  ++decisions_;

  const int energy = obs.state.energy;
  const int keys = obs.state.keys;
  auto offered = [&](Action a) {
    return std::find(obs.available_actions.begin(), obs.available_actions.end(), action_token(a)) !=
           obs.available_actions.end();
  };
  const bool can_scan = offered(Action::Scan);
  const bool can_measure = offered(Action::Measure);

  auto choose = [&](Action a) {
    scanned_last_ = a == Action::Scan;
    return decision_for(a);
  };
  auto facing_glyph = [&](char target) {
    return [this, target](const NavState& s) {
      const Position f = s.pos + direction_delta(s.facing);
      return cell(f) == target && f != s.pos;
    };
  };
  auto onto_glyph = [&](char target) {
    return [this, target](const NavState& s) { return cell(s.pos) == target; };
  };
  auto latents_within = [&](Position center, int radius) {
    int count = 0;
    for (int dr = -radius; dr <= radius; ++dr) {
      for (int dc = -radius; dc <= radius; ++dc) {
        count += cell(Position{center.col + dc, center.row + dr}) == 'o';
      }
    }
    return count;
  };

  if (decisions_ == 1 && can_scan && energy >= assumed_scan_cost_) return choose(Action::Scan);

  if (can_measure && energy > assumed_measure_cost_ &&
      latents_within(pos_, opt_.measure_radius) >= 2) {
    return choose(Action::Measure);
  }

  if (keys >= info_.keys_required) {
    if (auto plan = plan_moves(extent_, extent_, {pos_, facing_},
                               [&](Position p) { return known_passable(p) || cell(p) == 'h'; },
                               facing_glyph('D'))) {
      return choose(plan->empty() ? Action::Interact : plan->front());
    }
  }

  const Position ahead = pos_ + direction_delta(facing_);
  if (keys < info_.keys_required && cell(ahead) == 'R' && energy >= opt_.energy_high) {
    return choose(Action::Interact);
  }

  if (!scanned_last_ && can_scan && energy >= assumed_scan_cost_ + opt_.energy_reserve &&
      frontier_unknown_percent() >= static_cast<int>(opt_.unknown_scan_threshold * 100)) {
    return choose(Action::Scan);
  }

  if (keys < info_.keys_required) {
    if (auto a = navigate(onto_glyph('k'), false)) return choose(*a);
    if (energy >= opt_.energy_high) {
      if (auto plan = navigate(facing_glyph('R'), true)) return choose(*plan);
    } else if (auto a = navigate(onto_glyph('e'), false)) {
      return choose(*a);
    }
  }

  if (can_measure && energy > assumed_measure_cost_) {
    const int radius = opt_.measure_radius;
    auto near_latent = [&](const NavState& s) { return latents_within(s.pos, radius) > 0; };
    if (near_latent({pos_, facing_})) return choose(Action::Measure);
    if (auto a = navigate(near_latent, false)) return choose(*a);
  }

  auto frontier = [this](const NavState& s) {
    if (!known_passable(s.pos)) return false;
    for (Direction d : kDirections) {
      if (cell(s.pos + direction_delta(d)) == '?') return true;
    }
    return false;
  };
  if (auto a = navigate(frontier, false)) return choose(*a);

  if (keys < info_.keys_required) {
    if (auto plan = navigate(facing_glyph('R'), true)) return choose(*plan);
  }
  return choose(move_action(kDirections[rng_.below(4)]));
}

// ---------------------------------------------------------------------------
// External

ExternalAgent::ExternalAgent(ChannelFactory connect, ExternalOptions options)
    : connect_(std::move(connect)), opt_(std::move(options)) {}

ExternalAgent::~ExternalAgent() {
  if (channel_) channel_->close();
}

bool ExternalAgent::send(const nlohmann::ordered_json& message) {
  std::string line = frame(message);
  transcript_.push_back("> " + line.substr(0, line.size() - 1));
  return channel_ && channel_->send_line(line);
}

bool ExternalAgent::begin_episode(const EpisodeInfo& info) {
  transcript_.clear();
  if (channel_) channel_->close();
  try {
    channel_ = connect_();
  } catch (const RuntimeFailure& e) {
    transcript_.push_back(fmt::format("! connect failed: {}", e.what()));
    channel_.reset();
    return false;
  }
  return send(episode_start_message(info));
}

Decision ExternalAgent::decide(const DecisionContext& ctx) {
  if (!send(observation_message(ctx.observation))) {
    return {std::nullopt, {}, DecisionStatus::ChannelClosed, "agent channel closed"};
  }
  ReadResult r = channel_->read_line(opt_.timeout);
  switch (r.status) {
    case ReadStatus::Timeout:
      transcript_.push_back("! timeout");
      return {std::nullopt, {}, DecisionStatus::Timeout, "decision timed out"};
    case ReadStatus::Closed:
      transcript_.push_back("! closed");
      return {std::nullopt, {}, DecisionStatus::ChannelClosed, "agent channel closed"};
    case ReadStatus::Ok:
      break;
  }
  transcript_.push_back("< " + r.line);
  ParsedReply reply = parse_action_reply(r.line);
  if (!reply.action) return {std::nullopt, r.line, DecisionStatus::Malformed, reply.error};
  return {reply.action, r.line, DecisionStatus::Ok, {}};
}

void ExternalAgent::end_episode(const EpisodeSummary& summary) {
  if (!channel_) return;
  send(episode_end_message(summary));
  channel_->close();
  channel_.reset();
}

Decision ReplayAgent::decide(const DecisionContext&) {
  if (next_ >= replies_.size()) {
    return {std::nullopt, {}, DecisionStatus::ChannelClosed, "replay exhausted"};
  }
  std::string raw = replies_[next_++];
  ParsedReply reply = parse_action_reply(raw);
  if (!reply.action) return {std::nullopt, std::move(raw), DecisionStatus::Malformed, reply.error};
  return {reply.action, std::move(raw), DecisionStatus::Ok, {}};
}

AgentFactory make_agent_factory(std::string_view spec, ExternalOptions external) {
  if (spec == "random") return [] { return std::make_unique<RandomAgent>(); };
  if (spec == "oracle") return [] { return std::make_unique<OracleAgent>(); };
  if (spec == "sense" || spec == "sense-then-act") {
    return [] { return std::make_unique<SenseThenActAgent>(); };
  }
  if (spec.rfind("cmd:", 0) == 0) {
    std::string command(spec.substr(4));
    require(!command.empty(), "agent spec 'cmd:' needs a command");
    return [command, external] {
      return std::make_unique<ExternalAgent>(
          [command] { return std::make_unique<ProcessChannel>(command); }, external);
    };
  }
  if (spec.rfind("tcp:", 0) == 0) {
    const std::string rest(spec.substr(4));
    const auto colon = rest.rfind(':');
    require(colon != std::string::npos && colon > 0, "agent spec 'tcp:' needs host:port");
    const std::string host = rest.substr(0, colon);
    const int port = std::stoi(rest.substr(colon + 1));
    return [host, port, external] {
      return std::make_unique<ExternalAgent>(
          [host, port] { return std::make_unique<TcpChannel>(host, port); }, external);
    };
  }
  throw ContractViolation(fmt::format("unknown agent spec '{}'", spec));
}

}  // namespace gridlab
