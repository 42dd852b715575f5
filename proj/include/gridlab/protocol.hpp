#pragma once

#include <chrono>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <sys/types.h>

#include "json.hpp"

#include "gridlab/errors.hpp"
#include "gridlab/observation.hpp"

namespace gridlab {

// Public episode parameters. Hidden dynamics (rule policy, collapse weights,
// noise and slip rates, the seed) never leave the engine.
struct EpisodeInfo {
  std::string agent_id;
  int grid_size = 0;
  int obs_radius = 0;
  int keys_required = 0;
  int step_budget = 0;
  bool measure_enabled = false;
  // For in-process agents' private random streams only; never serialized.
  std::uint64_t seed = 0;
};

EpisodeInfo episode_info(const EpisodeConfig& config, std::string agent_id);

struct EpisodeSummary {
  Outcome outcome = Outcome::Running;
  double score = 0.0;
  int steps = 0;
  bool aborted = false;
};

// Line-delimited JSON frames. Key order is fixed.
nlohmann::ordered_json observation_message(const Observation& obs);
nlohmann::ordered_json episode_start_message(const EpisodeInfo& info);
nlohmann::ordered_json episode_end_message(const EpisodeSummary& summary);
nlohmann::ordered_json error_message(std::string_view message);
nlohmann::ordered_json action_message(Action a);

// Serialized frame including the trailing '\n'.
std::string frame(const nlohmann::ordered_json& message);

struct ParsedReply {
  std::optional<Action> action;
  std::string error;
};

// Accepts {"type":"action","action":"<TOKEN>"} (unknown fields ignored) or a
// bare token line. Surrounding whitespace is stripped; the token must then
// match a canonical action exactly.
ParsedReply parse_action_reply(std::string_view line);

enum class ReadStatus { Ok, Timeout, Closed };

struct ReadResult {
  ReadStatus status = ReadStatus::Closed;
  std::string line;  // without the terminator
};

class LineChannel {
 public:
  virtual ~LineChannel() = default;
  // false when the peer is gone.
  virtual bool send_line(std::string_view line) = 0;
  virtual ReadResult read_line(std::chrono::milliseconds timeout) = 0;
  virtual void close() = 0;
};

// Line reader/writer over a pair of file descriptors.
class FdChannel : public LineChannel {
 public:
  FdChannel(int read_fd, int write_fd) : read_fd_(read_fd), write_fd_(write_fd) {}
  ~FdChannel() override;
  FdChannel(const FdChannel&) = delete;
  FdChannel& operator=(const FdChannel&) = delete;

  bool send_line(std::string_view line) override;
  ReadResult read_line(std::chrono::milliseconds timeout) override;
  void close() override;

 protected:
  void close_fds();

  int read_fd_;
  int write_fd_;
  std::string buffer_;
  bool eof_ = false;
};

// Child process started via /bin/sh -c, talking over stdin/stdout.
class ProcessChannel : public FdChannel {
 public:
  explicit ProcessChannel(const std::string& command);
  ~ProcessChannel() override;
  void close() override;

 private:
  pid_t pid_ = -1;
};

class TcpChannel : public FdChannel {
 public:
  TcpChannel(const std::string& host, int port);
};

}  // namespace gridlab
