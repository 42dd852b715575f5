#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "gridlab/analysis.hpp"
#include "gridlab/harness.hpp"
#include "gridlab/worldgen.hpp"

namespace fs = std::filesystem;
using namespace gridlab;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

std::string upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

// Options shared by every subcommand: a base config file, the stressor
// switch and one override per EpisodeConfig field.
struct ConfigFlags {
  std::string config_file;
  bool stressors_off = false;
  std::map<std::string, std::string> overrides;

  void attach(CLI::App* app) {
    app->add_option("--config", config_file, "key=value config file")->envname("GRIDLAB_CONFIG");
    app->add_flag("--stressors-off", stressors_off, "disable noise, slip, latents, spread and schedules");
    for (const auto& f : config_fields()) {
      const std::string name(f.name);
      std::string flags = "--" + name;
      if (name == "grid_size") flags = "--size,--grid_size";
      if (name == "step_budget") flags = "--budget,--step_budget";
      app->add_option(flags, overrides[name], fmt::format("override {} (default {})", name,
                                                          get_field(EpisodeConfig{}, name)))
          ->envname("GRIDLAB_" + upper(name));
    }
  }

  EpisodeConfig build() const {
    EpisodeConfig c;
    if (!config_file.empty()) {
      std::ifstream in(config_file);
      if (!in) throw RuntimeFailure("cannot read config file " + config_file);
      std::stringstream ss;
      ss << in.rdbuf();
      c = config_from_kv(ss.str());
    }
    if (stressors_off) c = with_stressors_off(c);
    for (const auto& [name, value] : overrides) {
      if (!value.empty()) set_field(c, name, value);
    }
    validate(c);
    return c;
  }
};

int default_workers() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw RuntimeFailure("cannot write " + path.string());
  out << content;
}

std::string report_text(const GenReport& r) {
  return fmt::format(
      "attempts {}\nreachable_keys {}\nreachable_rules {}\nreachable_latents {}\n"
      "door_reachable {}\nagent_door_dist {}\n",
      r.attempts, r.reachable_keys, r.reachable_rules, r.reachable_latents,
      r.door_reachable ? 1 : 0, r.agent_door_dist);
}

// Human driver: prints each observation and reads one reply per line.
class ConsoleAgent : public Agent {
 public:
  explicit ConsoleAgent(bool unicode) : unicode_(unicode) {}
  std::string id() const override { return "human"; }
  bool begin_episode(const EpisodeInfo&) override { return true; }
  Decision decide(const DecisionContext& ctx) override {
    for (const auto& e : ctx.last_events) std::cout << describe_event(e) << '\n';
    std::cout << '\n' << render_text(ctx.observation, unicode_) << "\n> " << std::flush;
    Decision d;
    if (!std::getline(std::cin, d.raw)) {
      d.status = DecisionStatus::ChannelClosed;
      d.error = "end of input";
      return d;
    }
    const ParsedReply reply = parse_action_reply(d.raw);
    d.action = reply.action;
    if (!d.action) {
      d.status = DecisionStatus::Malformed;
      d.error = reply.error;
    }
    return d;
  }

 private:
  bool unicode_;
};

int cmd_gen(const ConfigFlags& flags, const std::string& out) {
  const EpisodeConfig c = flags.build();
  const GenResult g = generate_map(c);
  const std::string dump = dump_map(g.world);
  if (out.empty()) {
    std::cout << dump << report_text(g.report);
  } else {
    write_file(out, dump);
    write_file(fs::path(out).string() + ".report", report_text(g.report));
  }
  return 0;
}

int cmd_play(const ConfigFlags& flags, const std::string& out, bool unicode) {
  const EpisodeConfig c = flags.build();
  ConsoleAgent agent(unicode);
  const EpisodeOutput o = run_episode(c, agent, c.seed);
  const auto& r = o.record;
  if (!r.steps.empty()) {
    for (const auto& e : r.steps.back().events) std::cout << describe_event(e) << '\n';
  }
  std::cout << fmt::format("\n{} after {} steps, score {}{}\n", outcome_name(r.outcome),
                           r.total_steps, format_score(r.final_score), r.aborted() ? " (aborted)" : "");
  if (!out.empty()) save_trajectory(out, r);
  return 0;
}

int cmd_run(const ConfigFlags& flags, const std::string& agent, const std::string& sizes, int n,
            const std::string& out, int workers, bool fixed_params) {
  BatchOptions opt;
  opt.base = flags.build();
  opt.root_seed = opt.base.seed;
  opt.workers = workers;
  opt.sample_params = !fixed_params && !flags.stressors_off;
  if (!out.empty()) opt.out_dir = fs::path(out);
  std::vector<int> size_list;
  for (const auto& s : split(sizes)) {
    EpisodeConfig probe = opt.base;
    set_field(probe, "grid_size", s);
    validate(probe);
    size_list.push_back(probe.grid_size);
  }
  if (size_list.empty()) size_list.push_back(opt.base.grid_size);
  const BatchResult result = run_batch(make_agent_factory(agent), size_list, n, opt);
  for (const auto& rec : result.records) {
    if (rec.aborted() && rec.steps.empty()) {
      std::cerr << "agent unreachable: " << rec.abort->reason << '\n';
      return kExitRuntime;
    }
  }
  std::cout << metrics_csv(result.rows);
  return 0;
}

int cmd_sweep(const ConfigFlags& flags, const std::string& factor_name, const std::string& values,
              int n, const std::string& agent, const std::string& out, int workers) {
  const auto factor = parse_sweep_factor(factor_name);
  if (!factor) throw ContractViolation("unknown sweep factor '" + factor_name +
                                       "' (noise, latent, hazard_spread, teleport)");
  std::vector<SweepValue> vals;
  for (const auto& v : split(values)) vals.push_back(parse_sweep_value(*factor, v));
  require(!vals.empty(), "--values must list at least one value");
  SweepOptions opt;
  opt.base = flags.build();
  opt.root_seed = opt.base.seed;
  opt.workers = workers;
  if (!out.empty()) opt.out_dir = fs::path(out);
  const SweepResult r = sweep(*factor, vals, n, make_agent_factory(agent), opt);
  std::cout << sweep_csv(r.points);
  return 0;
}

int cmd_analyze(const std::string& dir, const std::string& out, int horizon, int window, double lambda) {
  const auto files = find_trajectory_files(dir);
  if (files.empty()) throw RuntimeFailure("no trajectories found in " + dir);
  std::map<std::string, std::vector<TrajectoryRecord>> by_agent;
  for (const auto& f : files) {
    TrajectoryRecord r = load_trajectory(f);
    by_agent[r.agent].push_back(std::move(r));
  }
  LogisticOptions lopt;
  lopt.lambda = lambda;
  lopt.holdout = true;
  const AttributionReport report = attribution_report(by_agent, lopt);
  const fs::path o = out.empty() ? fs::path(dir) : fs::path(out);
  write_file(o / "profiles.csv", profiles_csv(by_agent, horizon, window));
  write_file(o / "features.csv", features_csv(by_agent));
  write_file(o / "coefficients.csv", coefficients_csv(report));
  write_file(o / "normalization.csv", normalization_csv(report.normalization));
  std::cout << fmt::format("{} trajectories, {} agents -> {}\n", files.size(), by_agent.size(), o.string());
  for (const auto& e : report.errors) std::cerr << "fit failed for " << e.agent << ": " << e.message << '\n';
  return 0;
}

int cmd_replay(const std::string& file, bool quiet) {
  const TrajectoryRecord r = load_trajectory(file);
  EpisodeConfig c = r.config;
  c.seed = r.seed;
  WorldState world = generate_map(c).world;
  for (const auto& s : r.steps) {
    const StepResult res = s.action ? step(world, *s.action) : step_invalid(world, "replay");
    const std::uint64_t h = world_hash(world);
    if (h != s.hash) {
      throw RuntimeFailure(fmt::format("hash mismatch at step {}: recorded {} replayed {}", s.step,
                                       hash_hex(s.hash), hash_hex(h)));
    }
    if (quiet) continue;
    std::cout << fmt::format("step {} {} | E {} K {} S {}\n", s.step,
                             s.action ? std::string(action_token(*s.action)) : "INVALID", world.energy,
                             world.keys, format_score(world.score));
    for (const auto& e : res.events) std::cout << "  " << describe_event(e) << '\n';
    for (const auto& row : local_truth_view(world)) std::cout << "  " << row << '\n';
  }
  if (r.abort) std::cout << fmt::format("aborted after step {}: {}\n", r.abort->step, r.abort->reason);
  std::cout << fmt::format("{} steps verified, outcome {}, score {}\n", r.steps.size(),
                           outcome_name(r.outcome), format_score(r.final_score));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Grid game environment, harness and analysis"};
  app.require_subcommand(1);

  ConfigFlags gen_flags, play_flags, run_flags, sweep_flags;
  std::string out, agent = "random", sizes, factor, values, traj_dir;
  int n = 50;
  int sweep_n = kDefaultSweepEpisodes;
  int workers = default_workers();
  bool fixed_params = false, unicode = false, quiet = false;
  int horizon = kDefaultProfileHorizon, window = 10;
  double lambda = 0.01;

  auto* gen = app.add_subcommand("gen", "generate a map and print its dump and report");
  gen_flags.attach(gen);
  gen->add_option("--out", out, "output file (default stdout)");

  auto* play = app.add_subcommand("play", "play one episode from the terminal");
  play_flags.attach(play);
  play->add_option("--out", out, "trajectory file to write");
  play->add_flag("--unicode", unicode, "draw the agent with arrows");

  auto* run = app.add_subcommand("run", "batch episodes and print the metrics table");
  run_flags.attach(run);
  run->add_option("--agent", agent, "random, oracle, sense, cmd:<command> or tcp:<host>:<port>")
      ->envname("GRIDLAB_AGENT");
  run->add_option("--sizes", sizes, "comma-separated grid sizes (default --size)")->envname("GRIDLAB_SIZES");
  run->add_option("--n", n, "episodes per size")->check(CLI::PositiveNumber)->envname("GRIDLAB_N");
  run->add_option("--out", out, "output directory")->envname("GRIDLAB_OUT");
  run->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber)->envname("GRIDLAB_WORKERS");
  run->add_flag("--fixed-params", fixed_params, "use the given rates instead of sampling them per instance");

  auto* sw = app.add_subcommand("sweep", "vary one stressor with the others off");
  sweep_flags.attach(sw);
  sw->add_option("--factor", factor, "noise, latent, hazard_spread or teleport")->required()
      ->envname("GRIDLAB_FACTOR");
  sw->add_option("--values", values, "comma-separated values; teleport accepts never")->required()
      ->envname("GRIDLAB_VALUES");
  sw->add_option("--n", sweep_n, "episodes per value")->check(CLI::PositiveNumber)->envname("GRIDLAB_N");
  sw->add_option("--agent", agent, "agent spec")->envname("GRIDLAB_AGENT");
  sw->add_option("--out", out, "output directory")->envname("GRIDLAB_OUT");
  sw->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber)->envname("GRIDLAB_WORKERS");

  auto* an = app.add_subcommand("analyze", "profiles, features and coefficients from trajectories");
  an->add_option("dir", traj_dir, "trajectory directory")->required();
  an->add_option("--out", out, "output directory (default: the trajectory directory)");
  an->add_option("--horizon", horizon, "profile horizon T")->check(CLI::PositiveNumber);
  an->add_option("--window", window, "post-key window")->check(CLI::PositiveNumber);
  an->add_option("--lambda", lambda, "L2 penalty")->check(CLI::NonNegativeNumber);

  auto* rp = app.add_subcommand("replay", "re-simulate a trajectory and check its hashes");
  rp->add_option("file", traj_dir, "trajectory file")->required();
  rp->add_flag("--quiet", quiet, "only verify");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (gen->parsed()) return cmd_gen(gen_flags, out);
    if (play->parsed()) return cmd_play(play_flags, out, unicode);
    if (run->parsed()) return cmd_run(run_flags, agent, sizes, n, out, workers, fixed_params);
    if (sw->parsed()) return cmd_sweep(sweep_flags, factor, values, sweep_n, agent, out, workers);
    if (an->parsed()) return cmd_analyze(traj_dir, out, horizon, window, lambda);
    if (rp->parsed()) return cmd_replay(traj_dir, quiet);
  } catch (const ContractViolation& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}
