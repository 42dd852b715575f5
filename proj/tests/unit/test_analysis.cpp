#include "doctest.h"
#include "gridlab/analysis.hpp"
#include "gridlab/harness.hpp"
#include "helpers.hpp"

#include <numeric>

using namespace gridlab;
using gridlab::testing::quiet_config;
using gridlab::testing::world_from_rows;

namespace {

// keys[i] is the key count after step i+1.
TrajectoryRecord episode(const std::vector<Action>& actions, const std::vector<int>& keys = {}) {
  TrajectoryRecord r;
  for (std::size_t i = 0; i < actions.size(); ++i) {
    StepRecord s;
    s.step = static_cast<int>(i) + 1;
    s.action = actions[i];
    s.keys = i < keys.size() ? keys[i] : 0;
    r.steps.push_back(s);
  }
  r.total_steps = static_cast<int>(actions.size());
  return r;
}

double freq(const ActionProfile& p, int t, Action a) { return p.freq[t - 1][static_cast<int>(a)]; }

}  // namespace

TEST_CASE("action profile counting") {
  std::vector<TrajectoryRecord> one = {episode({Action::Scan, Action::MoveE})};
  auto p = action_profile(one, 5);
  CHECK(freq(p, 1, Action::Scan) == 1.0);
  CHECK(freq(p, 2, Action::MoveE) == 1.0);
  CHECK(p.active[2] == 0);
  CHECK(p.non_movement(1) == std::array<double, 3>{1.0, 0.0, 0.0});

  std::vector<TrajectoryRecord> two = {episode({Action::MoveN}), episode({Action::Scan, Action::Interact})};
  p = action_profile(two, 5);
  CHECK(p.active[0] == 2);
  CHECK(p.active[1] == 1);
  CHECK(freq(p, 1, Action::Scan) == 0.5);
  CHECK(freq(p, 2, Action::Interact) == 1.0);

  CHECK_THROWS_AS(action_profile(two, 0), ContractViolation);
  CHECK_THROWS_AS(action_profile(std::vector<TrajectoryRecord>{}, 5), ContractViolation);
}

TEST_CASE("invalid steps are left out of the profile") {
  auto r = episode({Action::Scan, Action::Scan});
  r.steps[1].action.reset();
  std::vector<TrajectoryRecord> recs = {r, episode({Action::MoveS, Action::MoveS})};
  const auto p = action_profile(recs, 2);
  CHECK(p.active[1] == 1);
  CHECK(freq(p, 2, Action::MoveS) == 1.0);
}

TEST_CASE("profile simplex on real episodes") {
  BatchOptions opt;
  const auto batch = run_batch(make_agent_factory("sense"), {8}, 6, opt);
  const auto p = action_profile(batch.records);
  for (int t = 1; t <= p.horizon; ++t) {
    if (p.active[t - 1] == 0) continue;
    CHECK(std::accumulate(p.freq[t - 1].begin(), p.freq[t - 1].end(), 0.0) == doctest::Approx(1.0).epsilon(1e-9));
  }
  const auto k0 = post_key_profile(batch.records, 0, 10);
  for (int t = 1; t <= 10; ++t) {
    CHECK(k0.profile.active[t - 1] == p.active[t - 1]);
    CHECK(k0.profile.freq[t - 1] == p.freq[t - 1]);
  }
}

TEST_CASE("post-key alignment") {
  std::vector<Action> acts(20, Action::MoveN);
  std::vector<int> keys(20, 0);
  for (int i = 6; i < 20; ++i) keys[i] = 1;  // key 1 reached at step 7
  for (int i = 7; i < 17; ++i) acts[i] = Action::Scan;
  std::vector<TrajectoryRecord> recs = {episode(acts, keys)};
  CHECK(key_milestone(recs[0], 1) == 7);
  CHECK(key_milestone(recs[0], 0) == 0);
  const auto pk = post_key_profile(recs, 1, 10);
  CHECK_FALSE(pk.empty);
  CHECK(pk.episodes == 1);
  for (int off = 1; off <= 10; ++off) CHECK(freq(pk.profile, off, Action::Scan) == 1.0);

  const auto none = post_key_profile(recs, 3, 10);
  CHECK(none.empty);
  CHECK(none.episodes == 0);
  CHECK_THROWS_AS(post_key_profile(recs, 1, 0), ContractViolation);
}

TEST_CASE("features on a hand-drawn map") {
  EpisodeConfig c = quiet_config();
  auto w = world_from_rows({"######", "#..Rh#", "#.#..#", "#.#..#", "#R.D.#", "######"}, {1, 1}, Direction::N, c);
  CHECK(hazard_rule_count(w.grid) == 1);
  const auto f = featurize(w);
  CHECK(f[0] == 6);
  CHECK(f[5] == 0.0);  // teleport never
  CHECK(f[6] == 0.0);
  CHECK(f[7] == 1);
  CHECK(f[8] == 5);  // down the west corridor, then east

  auto iso = world_from_rows({"######", "#R...#", "#....#", "#...h#", "#R.D.#", "######"}, {1, 2}, Direction::N, c);
  CHECK(hazard_rule_count(iso.grid) == 0);

  EpisodeConfig d;
  d.grid_size = 8;
  const auto g = featurize(d, 5);
  CHECK(g[5] == doctest::Approx(200.0 / 50));
  CHECK(g[6] == doctest::Approx(200.0 / 25));
}

TEST_CASE("attribution isolates per-agent failures") {
  std::map<std::string, std::vector<TrajectoryRecord>> by_agent;
  BatchOptions opt;
  by_agent["sense"] = run_batch(make_agent_factory("sense"), {6, 8}, 25, opt).records;
  by_agent["loser"] = by_agent["sense"];
  for (auto& r : by_agent["loser"]) r.outcome = Outcome::Timeout;
  const auto report = attribution_report(by_agent);
  REQUIRE(report.errors.size() == 1);
  CHECK(report.errors[0].agent == "loser");
  REQUIRE(report.rows.size() == 1);
  CHECK(report.rows[0].agent == "sense");
  CHECK(report.rows[0].n == 50);
  CHECK(report.rows[0].model.weights.size() == 9);
  CHECK(report.normalization.min.size() == 9);

  const auto coef = coefficients_csv(report);
  CHECK(coef.rfind("agent,n,width,noise,move_fail,latent,hazard_spread,teleport_rate,shift_rate,hr,agent_door_dist,bias,accuracy,error\n", 0) == 0);
  CHECK(coef.find("loser,,") != std::string::npos);
  CHECK(normalization_csv(report.normalization).rfind("feature,min,max\nwidth,6,8\n", 0) == 0);
  CHECK(features_csv(by_agent).rfind("agent,seed,win,width,", 0) == 0);
  CHECK(profiles_csv(by_agent).rfind("agent,profile,step,category,frequency\n", 0) == 0);
}
