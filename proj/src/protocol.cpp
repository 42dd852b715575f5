#include "gridlab/protocol.hpp"

#include <cerrno>
#include <csignal>
#include <cstring>
#include <thread>

#include <fcntl.h>
#include <netdb.h>
#include <poll.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <fmt/format.h>

#include "gridlab/errors.hpp"

namespace gridlab {

EpisodeInfo episode_info(const EpisodeConfig& config, std::string agent_id) {
  return {std::move(agent_id), config.grid_size,  config.obs_radius,
          config.keys_required, config.step_budget, config.latent_fraction > 0.0,
          config.seed};
}

nlohmann::ordered_json observation_message(const Observation& obs) {
  nlohmann::ordered_json m;
  m["type"] = "observation";
  m["step"] = obs.state.step;
  m["text"] = render_text(obs);
  m["state"] = {{"step", obs.state.step},
                {"energy", obs.state.energy},
                {"keys", obs.state.keys},
                {"score", obs.state.score}};
  m["actions"] = obs.available_actions;
  return m;
}

nlohmann::ordered_json episode_start_message(const EpisodeInfo& info) {
  nlohmann::ordered_json m;
  m["type"] = "episode_start";
  m["agent"] = info.agent_id;
  m["config"] = {{"grid_size", info.grid_size},
                 {"obs_radius", info.obs_radius},
                 {"keys_required", info.keys_required},
                 {"step_budget", info.step_budget},
                 {"measure_enabled", info.measure_enabled}};
  return m;
}

nlohmann::ordered_json episode_end_message(const EpisodeSummary& s) {
  nlohmann::ordered_json m;
  m["type"] = "episode_end";
  m["outcome"] = std::string(outcome_name(s.outcome));
  m["score"] = s.score;
  m["steps"] = s.steps;
  m["aborted"] = s.aborted;
  return m;
}

nlohmann::ordered_json error_message(std::string_view message) {
  nlohmann::ordered_json m;
  m["type"] = "error";
  m["message"] = std::string(message);
  return m;
}

nlohmann::ordered_json action_message(Action a) {
  nlohmann::ordered_json m;
  m["type"] = "action";
  m["action"] = std::string(action_token(a));
  return m;
}

std::string frame(const nlohmann::ordered_json& message) {
  return message.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) + "\n";
}

namespace {

std::string_view strip(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

}  // namespace

ParsedReply parse_action_reply(std::string_view line) {
  const std::string_view body = strip(line);
  if (!body.empty() && body.front() == '{') {
    const auto j = nlohmann::json::parse(body, nullptr, false);
    if (j.is_discarded() || !j.is_object()) return {std::nullopt, "malformed JSON reply"};
    if (!j.contains("type") || j["type"] != "action") return {std::nullopt, "reply type is not 'action'"};
    if (!j.contains("action") || !j["action"].is_string()) {
      return {std::nullopt, "reply has no action string"};
    }
    const auto token = j["action"].get<std::string>();
    if (auto a = parse_action_token(token)) return {a, {}};
    return {std::nullopt, fmt::format("unknown action token '{}'", token)};
  }
  if (auto a = parse_action_token(body)) return {a, {}};
  return {std::nullopt, "reply is not exactly one action token"};
}

FdChannel::~FdChannel() { close_fds(); }

void FdChannel::close_fds() {
  if (write_fd_ >= 0 && write_fd_ != read_fd_) ::close(write_fd_);
  if (read_fd_ >= 0) ::close(read_fd_);
  read_fd_ = write_fd_ = -1;
}

void FdChannel::close() { close_fds(); }

bool FdChannel::send_line(std::string_view line) {
  if (write_fd_ < 0) return false;
  std::string data(line);
  if (data.empty() || data.back() != '\n') data += '\n';
  std::size_t off = 0;
  while (off < data.size()) {
    const ssize_t n = ::send(write_fd_, data.data() + off, data.size() - off, MSG_NOSIGNAL);
    if (n < 0 && errno == ENOTSOCK) {
      const ssize_t m = ::write(write_fd_, data.data() + off, data.size() - off);
      if (m < 0) {
        if (errno == EINTR) continue;
        return false;
      }
      off += static_cast<std::size_t>(m);
      continue;
    }
    if (n < 0) {
      if (errno == EINTR) continue;
      return false;
    }
    off += static_cast<std::size_t>(n);
  }
  return true;
}

ReadResult FdChannel::read_line(std::chrono::milliseconds timeout) {
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  while (true) {
    const auto nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return {ReadStatus::Ok, std::move(line)};
    }
    if (eof_ || read_fd_ < 0) return {ReadStatus::Closed, {}};
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) return {ReadStatus::Timeout, {}};
    pollfd pfd{read_fd_, POLLIN, 0};
    const int rc = ::poll(&pfd, 1, static_cast<int>(left.count()));
    if (rc < 0) {
      if (errno == EINTR) continue;
      return {ReadStatus::Closed, {}};
    }
    if (rc == 0) return {ReadStatus::Timeout, {}};
    char buf[4096];
    const ssize_t n = ::read(read_fd_, buf, sizeof buf);
    if (n < 0) {
      if (errno == EINTR || errno == EAGAIN) continue;
      eof_ = true;
    } else if (n == 0) {
      eof_ = true;
    } else {
      buffer_.append(buf, static_cast<std::size_t>(n));
    }
  }
}

namespace {

std::pair<int, int> spawn(const std::string& command, pid_t& pid) {
  // A dead child must surface as a failed write, not a signal.
  std::signal(SIGPIPE, SIG_IGN);
  int to_child[2];
  int from_child[2];
  if (::pipe(to_child) != 0) throw RuntimeFailure("pipe() failed");
  if (::pipe(from_child) != 0) {
    ::close(to_child[0]);
    ::close(to_child[1]);
    throw RuntimeFailure("pipe() failed");
  }
  pid = ::fork();
  if (pid < 0) throw RuntimeFailure("fork() failed");
  if (pid == 0) {
    ::dup2(to_child[0], STDIN_FILENO);
    ::dup2(from_child[1], STDOUT_FILENO);
    ::close(to_child[0]);
    ::close(to_child[1]);
    ::close(from_child[0]);
    ::close(from_child[1]);
    ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::close(to_child[0]);
  ::close(from_child[1]);
  ::fcntl(to_child[1], F_SETFD, FD_CLOEXEC);
  ::fcntl(from_child[0], F_SETFD, FD_CLOEXEC);
  return {from_child[0], to_child[1]};
}

}  // namespace

ProcessChannel::ProcessChannel(const std::string& command) : FdChannel(-1, -1) {
  auto [r, w] = spawn(command, pid_);
  read_fd_ = r;
  write_fd_ = w;
}

ProcessChannel::~ProcessChannel() { ProcessChannel::close(); }

void ProcessChannel::close() {
  // Closing stdin is the child's cue to exit.
  if (write_fd_ >= 0) {
    ::close(write_fd_);
    write_fd_ = -1;
  }
  if (pid_ > 0) {
    int status = 0;
    bool reaped = false;
    for (int i = 0; i < 100 && !reaped; ++i) {
      if (::waitpid(pid_, &status, WNOHANG) == pid_) {
        reaped = true;
      } else {
        std::this_thread::sleep_for(std::chrono::milliseconds(10));
      }
    }
    if (!reaped) {
      ::kill(pid_, SIGKILL);
      ::waitpid(pid_, &status, 0);
    }
    pid_ = -1;
  }
  close_fds();
}

TcpChannel::TcpChannel(const std::string& host, int port) : FdChannel(-1, -1) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  const std::string service = std::to_string(port);
  if (::getaddrinfo(host.c_str(), service.c_str(), &hints, &res) != 0 || res == nullptr) {
    throw RuntimeFailure(fmt::format("cannot resolve {}:{}", host, port));
  }
  int fd = -1;
  for (addrinfo* p = res; p != nullptr; p = p->ai_next) {
    fd = ::socket(p->ai_family, p->ai_socktype, p->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, p->ai_addr, p->ai_addrlen) == 0) break;
    ::close(fd);
    fd = -1;
  }
  ::freeaddrinfo(res);
  if (fd < 0) throw RuntimeFailure(fmt::format("cannot connect to {}:{}", host, port));
  read_fd_ = fd;
  write_fd_ = fd;
}

}  // namespace gridlab
