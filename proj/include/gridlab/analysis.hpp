#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gridlab/logistic.hpp"
#include "gridlab/trajectory.hpp"

namespace gridlab {

inline constexpr int kActionCategories = 7;
inline constexpr int kDefaultProfileHorizon = 200;

using CategoryFreq = std::array<double, kActionCategories>;  // indexed by Action

struct ActionProfile {
  int horizon = 0;
  // Index t-1 holds step t. Steps without active episodes have active == 0
  // and all-zero frequencies.
  std::vector<int> active;
  std::vector<CategoryFreq> freq;

  // SCAN, MEASURE, INTERACT frequencies at step t.
  std::array<double, 3> non_movement(int t) const;
};

// Invalid-action steps carry no action and are left out of both the count
// and the denominator at their step.
ActionProfile action_profile(std::span<const TrajectoryRecord> records, int horizon = kDefaultProfileHorizon);

struct PostKeyProfile {
  int level = 0;
  int window = 0;
  int episodes = 0;  // episodes reaching the level
  bool empty = true;
  ActionProfile profile;  // offsets 1..window after the milestone
};

// First step at which keys reached `level` (0 for level 0); nullopt if never.
std::optional<int> key_milestone(const TrajectoryRecord& r, int level);

PostKeyProfile post_key_profile(std::span<const TrajectoryRecord> records, int level, int window = 10);

inline constexpr int kFeatureCount = 9;
inline constexpr std::array<std::string_view, kFeatureCount> kFeatureNames = {
    "width", "noise", "move_fail", "latent", "hazard_spread",
    "teleport_rate", "shift_rate", "hr", "agent_door_dist"};

using FeatureVector = std::array<double, kFeatureCount>;

// Regenerates the initial map from (config, seed).
FeatureVector featurize(const EpisodeConfig& config, std::uint64_t seed);
FeatureVector featurize(const WorldState& initial);

int hazard_rule_count(const Grid& grid);

struct AttributionRow {
  std::string agent;
  int n = 0;
  LogisticModel model;
};

struct AttributionError {
  std::string agent;
  std::string message;
};

struct AttributionReport {
  MinMax normalization;  // pooled over every agent's episodes
  std::vector<AttributionRow> rows;
  std::vector<AttributionError> errors;
};

// One model per agent over normalized features, agents in id order.
// A failing fit is reported and does not stop the others.
AttributionReport attribution_report(const std::map<std::string, std::vector<TrajectoryRecord>>& by_agent,
                                     LogisticOptions options = {.holdout = true});

// agent,profile,step,category,frequency
std::string profiles_csv(const std::map<std::string, std::vector<TrajectoryRecord>>& by_agent,
                         int horizon = kDefaultProfileHorizon, int window = 10);
// agent,seed,win,<9 raw features>
std::string features_csv(const std::map<std::string, std::vector<TrajectoryRecord>>& by_agent);
// agent,n,<9 weights>,bias,accuracy,error
std::string coefficients_csv(const AttributionReport& report);
// feature,min,max
std::string normalization_csv(const MinMax& mm);

}  // namespace gridlab
