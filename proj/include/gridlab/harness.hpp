#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gridlab/agents.hpp"
#include "gridlab/trajectory.hpp"

namespace gridlab {

struct EpisodeOutput {
  TrajectoryRecord record;
  std::vector<std::string> transcript;
};

// Generates the map for (config, seed) and loops observe -> decide -> step
// until the episode ends or the agent's channel dies (recorded as an
// aborted, timeout-equivalent failure).
EpisodeOutput run_episode(const EpisodeConfig& config, Agent& agent, std::uint64_t seed);

// Main-run parameters: noise ~ U(0,0.2), move_fail ~ U(0,0.1),
// latent ~ U(0,0.2); 5x5 window, shift 25, teleport 50, drift 100.
EpisodeConfig sample_instance_params(const EpisodeConfig& base, std::uint64_t seed);

std::uint64_t episode_seed(std::uint64_t root, int grid_size, int index);

struct MetricsRow {
  std::string agent;
  int grid_size = 0;
  int n_episodes = 0;
  int wins = 0;
  double acc = 0.0;
  // Means over successful episodes only; nullopt when there are none.
  std::optional<double> score;
  std::optional<double> steps;
  bool operator==(const MetricsRow&) const = default;
};

MetricsRow aggregate_metrics(std::string agent, int grid_size,
                             std::span<const TrajectoryRecord> records);

// agent,size,n,acc,score,steps with "-" for undefined means.
std::string metrics_csv(std::span<const MetricsRow> rows);

struct EpisodeJob {
  EpisodeConfig config;
  std::uint64_t seed = 0;
  std::filesystem::path relative_path;  // under the output directory
};

// Runs jobs on `workers` threads; results are returned in job order so the
// outcome never depends on scheduling. Files are written by the caller's
// thread after all jobs finish.
std::vector<EpisodeOutput> run_jobs(const std::vector<EpisodeJob>& jobs, const AgentFactory& factory,
                                    int workers);

void write_outputs(const std::filesystem::path& out_dir, const std::vector<EpisodeJob>& jobs,
                   const std::vector<EpisodeOutput>& outputs);

struct BatchOptions {
  EpisodeConfig base;
  std::uint64_t root_seed = 0;
  int workers = 1;
  std::optional<std::filesystem::path> out_dir;
  bool sample_params = true;
};

struct BatchResult {
  std::vector<MetricsRow> rows;
  std::vector<TrajectoryRecord> records;
};

BatchResult run_batch(const AgentFactory& factory, const std::vector<int>& sizes, int n_per_size,
                      const BatchOptions& options);

enum class SweepFactor { Noise, Latent, HazardSpread, TeleportStep };

std::string_view sweep_factor_name(SweepFactor f);  // noise, latent, hazard_spread, teleport
std::optional<SweepFactor> parse_sweep_factor(std::string_view s);

struct SweepValue {
  double value = 0.0;
  bool never = false;  // TeleportStep only
  std::string label() const;
  bool operator==(const SweepValue&) const = default;
};

SweepValue parse_sweep_value(SweepFactor f, std::string_view text);

// All stressors off except the swept one.
EpisodeConfig sweep_config(const EpisodeConfig& base, SweepFactor f, const SweepValue& v);

struct SweepPoint {
  SweepFactor factor = SweepFactor::Noise;
  SweepValue value;
  int n = 0;
  int wins = 0;
  double win_rate = 0.0;
  double mean_steps = 0.0;  // over all episodes, timeouts at full length
};

struct SweepOptions {
  EpisodeConfig base;
  std::uint64_t root_seed = 0;
  int workers = 1;
  std::optional<std::filesystem::path> out_dir;
};

inline constexpr int kDefaultSweepEpisodes = 5;

struct SweepResult {
  std::vector<SweepPoint> points;
  std::vector<TrajectoryRecord> records;
};

// Episode i of every point shares a seed, so points differ only in the
// swept factor.
SweepResult sweep(SweepFactor factor, const std::vector<SweepValue>& values, int n_per_point,
                  const AgentFactory& factory, const SweepOptions& options);

// factor,value,n,wins,win_rate,mean_steps
std::string sweep_csv(std::span<const SweepPoint> points);

}  // namespace gridlab
