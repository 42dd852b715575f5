#include "gridlab/harness.hpp"

#include <atomic>
#include <fstream>
#include <mutex>
#include <thread>

#include <fmt/format.h>

#include "gridlab/errors.hpp"
#include "gridlab/worldgen.hpp"

namespace gridlab {

namespace {

std::string status_detail(const Decision& d) {
  switch (d.status) {
    case DecisionStatus::Ok: return {};
    case DecisionStatus::Malformed: return "malformed";
    case DecisionStatus::Timeout: return "timeout";
    case DecisionStatus::ChannelClosed: return "channel closed";
  }
  return {};
}

}  // namespace

EpisodeOutput run_episode(const EpisodeConfig& base, Agent& agent, std::uint64_t seed) {
  EpisodeConfig config = base;
  config.seed = seed;
  GenResult gen = generate_map(config);
  WorldState& world = gen.world;

  TrajectoryRecord rec;
  rec.agent = agent.id();
  rec.seed = seed;
  rec.config = config;

  Observer observer(config);
  ObservationLog log;
  std::vector<Event> last_events;

  auto abort_episode = [&](const std::string& reason) {
    rec.abort = AbortMarker{world.step, reason};
    rec.outcome = Outcome::Timeout;
  };

  if (!agent.begin_episode(episode_info(config, agent.id()))) {
    abort_episode("agent unreachable at episode start");
  }

  while (!rec.abort && world.outcome == Outcome::Running) {
    Observation obs = observer.observe(world, log);
    DecisionContext ctx{obs, last_events, agent.privileged() ? &world : nullptr};
    Decision decision = agent.decide(ctx);
    if (decision.status == DecisionStatus::ChannelClosed) {
      abort_episode(decision.error.empty() ? "agent channel closed" : decision.error);
      break;
    }
    StepResult res = decision.action ? step(world, *decision.action)
                                     : step_invalid(world, status_detail(decision));
    StepRecord s;
    s.step = world.step;
    // A MEASURE with latent mechanics disabled is logged as invalid.
    const bool invalid = !res.events.empty() && res.events.front().kind == EventKind::InvalidAction;
    if (!invalid) s.action = decision.action;
    s.raw = decision.raw;
    s.succeeded = res.action_succeeded;
    s.events = res.events;
    s.reward_delta = res.reward_delta;
    s.energy = world.energy;
    s.keys = world.keys;
    s.score = world.score;
    s.view = local_truth_view(world);
    s.hash = world_hash(world);
    rec.steps.push_back(std::move(s));

    log.record(decision.action && !invalid ? std::string(action_token(*decision.action)) : "INVALID",
               res.events);
    last_events = std::move(res.events);
  }
  if (!rec.abort) rec.outcome = world.outcome;
  rec.total_steps = world.step;
  rec.final_score = world.score;
  agent.end_episode({rec.outcome, rec.final_score, rec.total_steps, rec.aborted()});
  return {std::move(rec), agent.transcript()};
}

EpisodeConfig sample_instance_params(const EpisodeConfig& base, std::uint64_t seed) {
  EpisodeConfig c = base;
  RngStream rng(seed, "params");
  c.noise_rate = draw_uniform(rng, 0.0, 0.2);
  c.move_fail = draw_uniform(rng, 0.0, 0.1);
  c.latent_fraction = draw_uniform(rng, 0.0, 0.2);
  c.obs_radius = 2;
  c.shift_interval = 25;
  c.teleport_interval = 50;
  c.drift_step = 100;
  c.seed = seed;
  return c;
}

std::uint64_t episode_seed(std::uint64_t root, int grid_size, int index) {
  return derive_seed(root, static_cast<std::uint64_t>(grid_size), static_cast<std::uint64_t>(index));
}

MetricsRow aggregate_metrics(std::string agent, int grid_size,
                             std::span<const TrajectoryRecord> records) {
  MetricsRow row;
  row.agent = std::move(agent);
  row.grid_size = grid_size;
  row.n_episodes = static_cast<int>(records.size());
  double score_sum = 0.0;
  double steps_sum = 0.0;
  for (const auto& r : records) {
    if (!r.won()) continue;
    ++row.wins;
    score_sum += r.final_score;
    steps_sum += r.total_steps;
  }
  row.acc = row.n_episodes == 0 ? 0.0 : static_cast<double>(row.wins) / row.n_episodes;
  if (row.wins > 0) {
    row.score = score_sum / row.wins;
    row.steps = steps_sum / row.wins;
  }
  return row;
}

std::string metrics_csv(std::span<const MetricsRow> rows) {
  std::string out = "agent,size,n,acc,score,steps\n";
  auto opt = [](const std::optional<double>& v) {
    return v ? fmt::format("{:.4f}", *v) : std::string("-");
  };
  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{:.4f},{},{}\n", r.agent, r.grid_size, r.n_episodes, r.acc,
                       opt(r.score), opt(r.steps));
  }
  return out;
}

std::vector<EpisodeOutput> run_jobs(const std::vector<EpisodeJob>& jobs, const AgentFactory& factory,
                                    int workers) {
  std::vector<EpisodeOutput> outputs(jobs.size());
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  auto work = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      try {
        auto agent = factory();
        outputs[i] = run_episode(jobs[i].config, *agent, jobs[i].seed);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = jobs.size();
        return;
      }
    }
  };
  const int n_threads = std::max(1, std::min<int>(workers, static_cast<int>(jobs.size())));
  if (n_threads == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(work);
  }
  if (error) std::rethrow_exception(error);
  return outputs;
}

void write_outputs(const std::filesystem::path& out_dir, const std::vector<EpisodeJob>& jobs,
                   const std::vector<EpisodeOutput>& outputs) {
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const auto path = out_dir / jobs[i].relative_path;
    save_trajectory(path, outputs[i].record);
    if (!outputs[i].transcript.empty()) {
      auto tpath = path;
      tpath.replace_extension(".transcript.txt");
      std::ofstream t(tpath, std::ios::binary);
      for (const auto& line : outputs[i].transcript) t << line << '\n';
    }
  }
}

BatchResult run_batch(const AgentFactory& factory, const std::vector<int>& sizes, int n_per_size,
                      const BatchOptions& options) {
  require(!sizes.empty(), "run_batch: empty size list");
  require(n_per_size >= 1, "run_batch: n must be >= 1");
  const std::string agent_id = factory()->id();
  std::vector<EpisodeJob> jobs;
  for (int size : sizes) {
    for (int i = 0; i < n_per_size; ++i) {
      const auto seed = episode_seed(options.root_seed, size, i);
      EpisodeConfig base = options.base;
      base.grid_size = size;
      EpisodeConfig cfg = options.sample_params ? sample_instance_params(base, seed) : base;
      cfg.seed = seed;
      jobs.push_back({cfg, seed,
                      std::filesystem::path(agent_id) / std::to_string(size) /
                          (std::to_string(seed) + ".jsonl")});
    }
  }
  auto outputs = run_jobs(jobs, factory, options.workers);
  if (options.out_dir) write_outputs(*options.out_dir, jobs, outputs);

  BatchResult result;
  for (auto& o : outputs) result.records.push_back(std::move(o.record));
  for (std::size_t s = 0; s < sizes.size(); ++s) {
    const auto first = result.records.begin() + static_cast<long>(s * static_cast<std::size_t>(n_per_size));
    result.rows.push_back(aggregate_metrics(
        agent_id, sizes[s], std::span<const TrajectoryRecord>(&*first, static_cast<std::size_t>(n_per_size))));
  }
  if (options.out_dir) {
    std::ofstream csv(*options.out_dir / "metrics.csv", std::ios::binary);
    csv << metrics_csv(result.rows);
  }
  return result;
}

std::string_view sweep_factor_name(SweepFactor f) {
  switch (f) {
    case SweepFactor::Noise: return "noise";
    case SweepFactor::Latent: return "latent";
    case SweepFactor::HazardSpread: return "hazard_spread";
    case SweepFactor::TeleportStep: return "teleport";
  }
  return "";
}

std::optional<SweepFactor> parse_sweep_factor(std::string_view s) {
  for (SweepFactor f : {SweepFactor::Noise, SweepFactor::Latent, SweepFactor::HazardSpread,
                        SweepFactor::TeleportStep}) {
    if (sweep_factor_name(f) == s) return f;
  }
  return std::nullopt;
}

std::string SweepValue::label() const { return never ? "never" : fmt::format("{}", value); }

SweepValue parse_sweep_value(SweepFactor f, std::string_view text) {
  if (f == SweepFactor::TeleportStep) {
    const Schedule s = parse_schedule(text);
    if (!s) return {0.0, true};
    require(*s >= 1, "teleport interval must be >= 1");
    return {static_cast<double>(*s), false};
  }
  EpisodeConfig probe;
  set_field(probe, "noise_rate", text);
  require(probe.noise_rate >= 0.0 && probe.noise_rate <= 1.0,
          fmt::format("sweep value {} outside [0,1]", text));
  return {probe.noise_rate, false};
}

EpisodeConfig sweep_config(const EpisodeConfig& base, SweepFactor f, const SweepValue& v) {
  EpisodeConfig c = with_stressors_off(base);
  switch (f) {
    case SweepFactor::Noise: c.noise_rate = v.value; break;
    case SweepFactor::Latent: c.latent_fraction = v.value; break;
    case SweepFactor::HazardSpread: c.hazard_spread_p = v.value; break;
    case SweepFactor::TeleportStep:
      c.teleport_interval = v.never ? Schedule{} : Schedule{static_cast<int>(v.value)};
      break;
  }
  return c;
}

SweepResult sweep(SweepFactor factor, const std::vector<SweepValue>& values, int n_per_point,
                  const AgentFactory& factory, const SweepOptions& options) {
  require(n_per_point >= 1, "sweep: n must be >= 1");
  const std::string agent_id = factory()->id();
  std::vector<EpisodeJob> jobs;
  for (const auto& v : values) {
    const EpisodeConfig cfg = sweep_config(options.base, factor, v);
    validate(cfg);
    for (int i = 0; i < n_per_point; ++i) {
      const auto seed = episode_seed(options.root_seed, cfg.grid_size, i);
      EpisodeConfig c = cfg;
      c.seed = seed;
      jobs.push_back({c, seed,
                      std::filesystem::path(agent_id) /
                          fmt::format("sweep_{}", sweep_factor_name(factor)) / v.label() /
                          (std::to_string(seed) + ".jsonl")});
    }
  }
  auto outputs = run_jobs(jobs, factory, options.workers);
  if (options.out_dir) write_outputs(*options.out_dir, jobs, outputs);

  SweepResult result;
  for (std::size_t p = 0; p < values.size(); ++p) {
    SweepPoint point{factor, values[p], n_per_point, 0, 0.0, 0.0};
    double steps = 0.0;
    for (int i = 0; i < n_per_point; ++i) {
      const auto& r = outputs[p * static_cast<std::size_t>(n_per_point) + static_cast<std::size_t>(i)].record;
      point.wins += r.won();
      steps += r.total_steps;
    }
    point.win_rate = static_cast<double>(point.wins) / n_per_point;
    point.mean_steps = steps / n_per_point;
    result.points.push_back(point);
  }
  for (auto& o : outputs) result.records.push_back(std::move(o.record));
  if (options.out_dir) {
    std::ofstream csv(*options.out_dir / fmt::format("sweep_{}.csv", sweep_factor_name(factor)),
                      std::ios::binary);
    csv << sweep_csv(result.points);
  }
  return result;
}

std::string sweep_csv(std::span<const SweepPoint> points) {
  std::string out = "factor,value,n,wins,win_rate,mean_steps\n";
  for (const auto& p : points) {
    out += fmt::format("{},{},{},{},{:.4f},{:.4f}\n", sweep_factor_name(p.factor), p.value.label(),
                       p.n, p.wins, p.win_rate, p.mean_steps);
  }
  return out;
}

}  // namespace gridlab
