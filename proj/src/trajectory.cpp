#include "gridlab/trajectory.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "json.hpp"

namespace gridlab {

using ojson = nlohmann::ordered_json;

TrajectoryParseError::TrajectoryParseError(int line_no, const std::string& what)
    : RuntimeFailure(fmt::format("line {}: {}", line_no, what)), line(line_no) {}

std::string hash_hex(std::uint64_t h) { return fmt::format("{:016x}", h); }

namespace {

std::string dump_line(const ojson& j) { return j.dump() + "\n"; }

std::uint64_t parse_hex(const std::string& s) {
  std::size_t used = 0;
  const auto v = std::stoull(s, &used, 16);
  if (used != s.size()) throw std::invalid_argument("bad hash");
  return v;
}

}  // namespace

std::string write_trajectory(const TrajectoryRecord& r) {
  std::string out;
  ojson header;
  header["type"] = "header";
  header["agent"] = r.agent;
  header["seed"] = r.seed;
  header["config"] = config_to_json(r.config);
  out += dump_line(header);

  for (const StepRecord& s : r.steps) {
    ojson j;
    j["type"] = "step";
    j["step"] = s.step;
    if (s.action) {
      j["action"] = std::string(action_token(*s.action));
    } else {
      j["action"] = nullptr;
    }
    j["raw"] = s.raw;
    j["succeeded"] = s.succeeded;
    ojson events = ojson::array();
    for (const Event& e : s.events) {
      events.push_back(ojson{{"kind", std::string(event_name(e.kind))}, {"detail", e.detail}});
    }
    j["events"] = std::move(events);
    j["reward_delta"] = s.reward_delta;
    j["energy"] = s.energy;
    j["keys"] = s.keys;
    j["score"] = s.score;
    j["view"] = s.view;
    j["hash"] = hash_hex(s.hash);
    out += dump_line(j);
  }
  if (r.abort) {
    out += dump_line(ojson{{"type", "abort"}, {"step", r.abort->step}, {"reason", r.abort->reason}});
  }
  ojson footer;
  footer["type"] = "footer";
  footer["outcome"] = std::string(outcome_name(r.outcome));
  footer["steps"] = r.total_steps;
  footer["score"] = r.final_score;
  footer["aborted"] = r.aborted();
  out += dump_line(footer);
  return out;
}

TrajectoryRecord parse_trajectory(std::string_view text) {
  TrajectoryRecord r;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  bool have_header = false;
  bool have_footer = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (have_footer) throw TrajectoryParseError(lineno, "content after footer");
    const auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("type")) {
      throw TrajectoryParseError(lineno, "not a JSON record");
    }
    try {
      const std::string type = j.at("type").get<std::string>();
      if (type == "header") {
        if (have_header) throw TrajectoryParseError(lineno, "duplicate header");
        r.agent = j.at("agent").get<std::string>();
        r.seed = j.at("seed").get<std::uint64_t>();
        r.config = config_from_json(j.at("config"));
        have_header = true;
      } else if (!have_header) {
        throw TrajectoryParseError(lineno, "record before header");
      } else if (type == "step") {
        if (r.abort) throw TrajectoryParseError(lineno, "step after abort marker");
        StepRecord s;
        s.step = j.at("step").get<int>();
        const int expected = r.steps.empty() ? 1 : r.steps.back().step + 1;
        if (s.step != expected) throw TrajectoryParseError(lineno, "non-contiguous step index");
        if (!j.at("action").is_null()) {
          const auto tok = j.at("action").get<std::string>();
          s.action = parse_action_token(tok);
          if (!s.action) throw TrajectoryParseError(lineno, "unknown action token " + tok);
        }
        s.raw = j.at("raw").get<std::string>();
        s.succeeded = j.at("succeeded").get<bool>();
        for (const auto& e : j.at("events")) {
          const auto name = e.at("kind").get<std::string>();
          const auto kind = event_from_name(name);
          if (!kind) throw TrajectoryParseError(lineno, "unknown event " + name);
          s.events.push_back({*kind, s.step, e.at("detail").get<std::string>()});
        }
        s.reward_delta = j.at("reward_delta").get<double>();
        s.energy = j.at("energy").get<int>();
        s.keys = j.at("keys").get<int>();
        s.score = j.at("score").get<double>();
        s.view = j.at("view").get<std::vector<std::string>>();
        s.hash = parse_hex(j.at("hash").get<std::string>());
        r.steps.push_back(std::move(s));
      } else if (type == "abort") {
        r.abort = AbortMarker{j.at("step").get<int>(), j.at("reason").get<std::string>()};
      } else if (type == "footer") {
        const auto name = j.at("outcome").get<std::string>();
        const auto o = outcome_from_name(name);
        if (!o) throw TrajectoryParseError(lineno, "unknown outcome " + name);
        r.outcome = *o;
        r.total_steps = j.at("steps").get<int>();
        r.final_score = j.at("score").get<double>();
        if (j.at("aborted").get<bool>() != r.aborted()) {
          throw TrajectoryParseError(lineno, "footer abort flag disagrees with abort marker");
        }
        have_footer = true;
      } else {
        throw TrajectoryParseError(lineno, "unknown record type " + type);
      }
    } catch (const TrajectoryParseError&) {
      throw;
    } catch (const std::exception& e) {
      throw TrajectoryParseError(lineno, e.what());
    }
  }
  if (!have_header) throw TrajectoryParseError(std::max(lineno, 1), "missing header");
  if (!have_footer) throw TrajectoryParseError(lineno + 1, "missing footer (truncated file)");
  return r;
}

void save_trajectory(const std::filesystem::path& path, const TrajectoryRecord& record) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw RuntimeFailure("cannot write " + path.string());
  out << write_trajectory(record);
}

TrajectoryRecord load_trajectory(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw RuntimeFailure("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_trajectory(ss.str());
}

std::vector<std::filesystem::path> find_trajectory_files(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> out;
  if (!std::filesystem::is_directory(dir)) return out;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".jsonl") out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace gridlab
