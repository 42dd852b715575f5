#include "gridlab/analysis.hpp"

#include <fmt/format.h>

#include "gridlab/dynamics.hpp"
#include "gridlab/errors.hpp"
#include "gridlab/worldgen.hpp"

namespace gridlab {

namespace {

void finish(ActionProfile& p, const std::vector<std::array<int, kActionCategories>>& counts) {
  for (int t = 0; t < p.horizon; ++t) {
    if (p.active[t] == 0) continue;
    for (int c = 0; c < kActionCategories; ++c) {
      p.freq[t][c] = static_cast<double>(counts[t][c]) / p.active[t];
    }
  }
}

double rate(int budget, const Schedule& s) { return s ? static_cast<double>(budget) / *s : 0.0; }

std::string fmt_double(double v) { return fmt::format("{:.6g}", v); }

}  // namespace

std::array<double, 3> ActionProfile::non_movement(int t) const {
  require(t >= 1 && t <= horizon, "non_movement: step out of range");
  const auto& f = freq[t - 1];
  return {f[static_cast<int>(Action::Scan)], f[static_cast<int>(Action::Measure)],
          f[static_cast<int>(Action::Interact)]};
}

ActionProfile action_profile(std::span<const TrajectoryRecord> records, int horizon) {
  require(horizon > 0, "action_profile: T must be positive");
  require(!records.empty(), "action_profile: empty trajectory set");
  ActionProfile p;
  p.horizon = horizon;
  p.active.assign(horizon, 0);
  p.freq.assign(horizon, CategoryFreq{});
  std::vector<std::array<int, kActionCategories>> counts(horizon, std::array<int, kActionCategories>{});
  for (const auto& r : records) {
    for (const auto& s : r.steps) {
      if (s.step < 1 || s.step > horizon || !s.action) continue;
      ++p.active[s.step - 1];
      ++counts[s.step - 1][static_cast<int>(*s.action)];
    }
  }
  finish(p, counts);
  return p;
}

std::optional<int> key_milestone(const TrajectoryRecord& r, int level) {
  if (level <= 0) return 0;
  for (const auto& s : r.steps) {
    if (s.keys >= level) return s.step;
  }
  return std::nullopt;
}

PostKeyProfile post_key_profile(std::span<const TrajectoryRecord> records, int level, int window) {
  require(window >= 1, "post_key_profile: window must be >= 1");
  require(level >= 0, "post_key_profile: level must be >= 0");
  PostKeyProfile out;
  out.level = level;
  out.window = window;
  out.profile.horizon = window;
  out.profile.active.assign(window, 0);
  out.profile.freq.assign(window, CategoryFreq{});
  std::vector<std::array<int, kActionCategories>> counts(window, std::array<int, kActionCategories>{});
  for (const auto& r : records) {
    const auto m = key_milestone(r, level);
    if (!m) continue;
    ++out.episodes;
    for (const auto& s : r.steps) {
      const int off = s.step - *m;
      if (off < 1 || off > window || !s.action) continue;
      ++out.profile.active[off - 1];
      ++counts[off - 1][static_cast<int>(*s.action)];
    }
  }
  out.empty = out.episodes == 0;
  finish(out.profile, counts);
  return out;
}

int hazard_rule_count(const Grid& grid) {
  int hr = 0;
  for (const Position& p : grid.find_all(Tile::Rule)) hr += hazard_adjacent(grid, p);
  return hr;
}

FeatureVector featurize(const WorldState& w) {
  const EpisodeConfig& c = w.config;
  const auto dist = shortest_path_len(w.grid, w.agent, w.door, [](Tile t) { return t != Tile::Wall; });
  require(dist.has_value(), "featurize: door unreachable from the start");
  return {static_cast<double>(c.grid_size),
          c.noise_rate,
          c.move_fail,
          c.latent_fraction,
          c.hazard_spread_p,
          rate(c.step_budget, c.teleport_interval),
          rate(c.step_budget, c.shift_interval),
          static_cast<double>(hazard_rule_count(w.grid)),
          static_cast<double>(*dist)};
}

FeatureVector featurize(const EpisodeConfig& config, std::uint64_t seed) {
  EpisodeConfig c = config;
  c.seed = seed;
  return featurize(generate_map(c).world);
}

AttributionReport attribution_report(const std::map<std::string, std::vector<TrajectoryRecord>>& by_agent,
                                     LogisticOptions options) {
  AttributionReport report;
  std::map<std::string, std::pair<Matrix, std::vector<int>>> data;
  Matrix pooled;
  for (const auto& [agent, records] : by_agent) {
    auto& [X, y] = data[agent];
    for (const auto& r : records) {
      const FeatureVector f = featurize(r.config, r.seed);
      X.emplace_back(f.begin(), f.end());
      y.push_back(r.won() ? 1 : 0);
      pooled.push_back(X.back());
    }
  }
  if (pooled.empty()) return report;
  report.normalization = fit_minmax(pooled);
  for (const auto& [agent, xy] : data) {
    try {
      AttributionRow row;
      row.agent = agent;
      row.n = static_cast<int>(xy.first.size());
      row.model = fit_logistic(apply_minmax(xy.first, report.normalization), xy.second, options);
      report.rows.push_back(std::move(row));
    } catch (const std::exception& e) {
      report.errors.push_back({agent, e.what()});
    }
  }
  return report;
}

std::string profiles_csv(const std::map<std::string, std::vector<TrajectoryRecord>>& by_agent,
                         int horizon, int window) {
  std::string out = "agent,profile,step,category,frequency\n";
  auto emit = [&](const std::string& agent, const std::string& name, const ActionProfile& p) {
    for (int t = 1; t <= p.horizon; ++t) {
      if (p.active[t - 1] == 0) continue;
      for (Action a : kAllActions) {
        out += fmt::format("{},{},{},{},{}\n", agent, name, t, action_token(a),
                           fmt_double(p.freq[t - 1][static_cast<int>(a)]));
      }
    }
  };
  for (const auto& [agent, records] : by_agent) {
    if (records.empty()) continue;
    emit(agent, "global", action_profile(records, horizon));
    for (int k = 0; k <= 3; ++k) {
      const auto pk = post_key_profile(records, k, window);
      if (!pk.empty) emit(agent, fmt::format("key{}", k), pk.profile);
    }
  }
  return out;
}

std::string features_csv(const std::map<std::string, std::vector<TrajectoryRecord>>& by_agent) {
  std::string out = "agent,seed,win";
  for (auto n : kFeatureNames) out += fmt::format(",{}", n);
  out += '\n';
  for (const auto& [agent, records] : by_agent) {
    for (const auto& r : records) {
      out += fmt::format("{},{},{}", agent, r.seed, r.won() ? 1 : 0);
      for (double v : featurize(r.config, r.seed)) out += "," + fmt_double(v);
      out += '\n';
    }
  }
  return out;
}

std::string coefficients_csv(const AttributionReport& report) {
  std::string out = "agent,n";
  for (auto n : kFeatureNames) out += fmt::format(",{}", n);
  out += ",bias,accuracy,error\n";
  for (const auto& row : report.rows) {
    out += fmt::format("{},{}", row.agent, row.n);
    for (double w : row.model.weights) out += "," + fmt_double(w);
    const double acc = row.model.heldout_accuracy.value_or(row.model.train_accuracy);
    out += fmt::format(",{},{},\n", fmt_double(row.model.bias), fmt_double(acc));
  }
  for (const auto& e : report.errors) {
    std::string msg = e.message;
    for (char& ch : msg) {
      if (ch == ',' || ch == '\n') ch = ';';
    }
    out += fmt::format("{},,,,,,,,,,,,,{}\n", e.agent, msg);
  }
  return out;
}

std::string normalization_csv(const MinMax& mm) {
  std::string out = "feature,min,max\n";
  for (std::size_t j = 0; j < mm.min.size() && j < kFeatureNames.size(); ++j) {
    out += fmt::format("{},{},{}\n", kFeatureNames[j], fmt_double(mm.min[j]), fmt_double(mm.max[j]));
  }
  return out;
}

}  // namespace gridlab
