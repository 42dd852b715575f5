#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gridlab/dynamics.hpp"
#include "gridlab/errors.hpp"

namespace gridlab {

struct StepRecord {
  int step = 0;
  std::optional<Action> action;  // nullopt for an invalid/missing action
  std::string raw;               // the agent's reply as received
  bool succeeded = false;
  std::vector<Event> events;
  double reward_delta = 0.0;
  int energy = 0;
  int keys = 0;
  double score = 0.0;
  std::vector<std::string> view;  // 3x3 ground truth around the agent
  std::uint64_t hash = 0;         // world_hash after the step
  bool operator==(const StepRecord&) const = default;
};

struct AbortMarker {
  int step = 0;  // last completed step
  std::string reason;
  bool operator==(const AbortMarker&) const = default;
};

struct TrajectoryRecord {
  std::string agent;
  std::uint64_t seed = 0;
  EpisodeConfig config;
  std::vector<StepRecord> steps;
  std::optional<AbortMarker> abort;
  Outcome outcome = Outcome::Timeout;
  int total_steps = 0;
  double final_score = 0.0;

  bool won() const { return outcome == Outcome::ExitSuccess; }
  bool aborted() const { return abort.has_value(); }
  bool operator==(const TrajectoryRecord&) const = default;
};

class TrajectoryParseError : public RuntimeFailure {
 public:
  TrajectoryParseError(int line, const std::string& what);
  int line;
};

// One JSON object per line: header, steps, optional abort marker, footer.
std::string write_trajectory(const TrajectoryRecord& record);
TrajectoryRecord parse_trajectory(std::string_view text);

void save_trajectory(const std::filesystem::path& path, const TrajectoryRecord& record);
TrajectoryRecord load_trajectory(const std::filesystem::path& path);

// All *.jsonl files below dir, sorted by path.
std::vector<std::filesystem::path> find_trajectory_files(const std::filesystem::path& dir);

std::string hash_hex(std::uint64_t h);

}  // namespace gridlab
