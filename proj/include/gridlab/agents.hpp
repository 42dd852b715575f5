#pragma once

#include <chrono>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gridlab/dynamics.hpp"
#include "gridlab/observation.hpp"
#include "gridlab/planning.hpp"
#include "gridlab/protocol.hpp"

namespace gridlab {

enum class DecisionStatus { Ok, Malformed, Timeout, ChannelClosed };

struct Decision {
  std::optional<Action> action;
  std::string raw;  // reply exactly as produced by the agent
  DecisionStatus status = DecisionStatus::Ok;
  std::string error;
};

struct DecisionContext {
  const Observation& observation;
  // Events of the step that produced this observation.
  const std::vector<Event>& last_events;
  // Ground truth, supplied only to privileged agents.
  const WorldState* truth = nullptr;
};

class Agent {
 public:
  virtual ~Agent() = default;
  virtual std::string id() const = 0;
  virtual bool privileged() const { return false; }
  // Resets all per-episode memory. Returns false if the agent is unreachable.
  virtual bool begin_episode(const EpisodeInfo& info) = 0;
  virtual Decision decide(const DecisionContext& ctx) = 0;
  virtual void end_episode(const EpisodeSummary& /*summary*/) {}
  // Raw protocol exchange for external agents; empty otherwise.
  virtual std::vector<std::string> transcript() const { return {}; }
};

using AgentFactory = std::function<std::unique_ptr<Agent>()>;

Decision decision_for(Action a);

// Uniform over the available actions, from a stream seeded by the episode.
class RandomAgent : public Agent {
 public:
  std::string id() const override { return "random"; }
  bool begin_episode(const EpisodeInfo& info) override;
  Decision decide(const DecisionContext& ctx) override;

 private:
  RngStream rng_;
};

// Full-knowledge planner: collects placed keys, then works rule tiles and
// latent cells, then opens the door. Stops with gave_up() when no target is
// reachable.
class OracleAgent : public Agent {
 public:
  std::string id() const override { return "oracle"; }
  bool privileged() const override { return true; }
  bool begin_episode(const EpisodeInfo& info) override;
  Decision decide(const DecisionContext& ctx) override;
  bool gave_up() const { return gave_up_; }

 private:
  bool gave_up_ = false;
};

struct SenseThenActOptions {
  // Prior beliefs the heuristic acts on; the engine never discloses them.
  int energy_high = 5;
  int scan_cost = 2;
  int measure_cost = 2;
  int measure_radius = 2;
  int scan_radius_boost = 2;
  int energy_reserve = 4;
  double unknown_scan_threshold = 0.4;
};

// Observation-only heuristic with dead-reckoned memory: scan first, measure
// clusters of latent cells, then navigate the remembered map toward keys,
// rule tiles (when energy is high), the door, or the nearest frontier.
class SenseThenActAgent : public Agent {
 public:
  explicit SenseThenActAgent(SenseThenActOptions options = {}) : opt_(options) {}
  std::string id() const override { return "sense-then-act"; }
  bool begin_episode(const EpisodeInfo& info) override;
  Decision decide(const DecisionContext& ctx) override;

  // Memory view for tests: '?' is unknown.
  char remembered(int dcol, int drow) const;

 private:
  void reset_memory();
  void track_motion(const std::vector<Event>& events);
  void integrate(const Observation& obs);
  std::optional<Action> navigate(const std::function<bool(const NavState&)>& goal,
                                 bool start_counts) const;
  bool known_passable(Position p) const;
  char& cell(Position p);
  char cell(Position p) const;
  int frontier_unknown_percent() const;

  SenseThenActOptions opt_;
  EpisodeInfo info_;
  int extent_ = 0;
  std::vector<char> memory_;
  Position pos_;
  Direction facing_ = Direction::N;
  std::optional<Position> pad_;
  int decisions_ = 0;
  bool scanned_last_ = false;
  int assumed_scan_cost_ = 2;
  int assumed_measure_cost_ = 2;
  RngStream rng_;
};

struct ExternalOptions {
  std::chrono::milliseconds timeout{60000};
  std::string id = "external";
};

using ChannelFactory = std::function<std::unique_ptr<LineChannel>()>;

// Speaks the line-delimited JSON protocol over a fresh channel per episode.
class ExternalAgent : public Agent {
 public:
  ExternalAgent(ChannelFactory connect, ExternalOptions options);
  ~ExternalAgent() override;
  std::string id() const override { return opt_.id; }
  bool begin_episode(const EpisodeInfo& info) override;
  Decision decide(const DecisionContext& ctx) override;
  void end_episode(const EpisodeSummary& summary) override;
  std::vector<std::string> transcript() const override { return transcript_; }

 private:
  bool send(const nlohmann::ordered_json& message);

  ChannelFactory connect_;
  ExternalOptions opt_;
  std::unique_ptr<LineChannel> channel_;
  std::vector<std::string> transcript_;
};

// Re-issues recorded raw replies in order; used to replay transcripts.
class ReplayAgent : public Agent {
 public:
  ReplayAgent(std::string id, std::vector<std::string> replies)
      : id_(std::move(id)), replies_(std::move(replies)) {}
  std::string id() const override { return id_; }
  bool begin_episode(const EpisodeInfo&) override {
    next_ = 0;
    return true;
  }
  Decision decide(const DecisionContext& ctx) override;

 private:
  std::string id_;
  std::vector<std::string> replies_;
  std::size_t next_ = 0;
};

// "random", "oracle", "sense", "cmd:<shell command>", "tcp:<host>:<port>".
AgentFactory make_agent_factory(std::string_view spec, ExternalOptions external = {});

}  // namespace gridlab
