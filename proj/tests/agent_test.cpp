// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "orgym/agent/ppo.hpp"
#include "orgym/common/error.hpp"
#include "support/gradcheck.hpp"
#include "support/ppo_trial.hpp"

using namespace orgym;
using namespace orgym::agent;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::kIo;
}

ran::KpmRecord rec(std::int64_t ts, ran::SliceId slice, ran::UeId ue, std::int64_t buf, std::int64_t tbs) {
  ran::KpmRecord r;
  r.ts_ms = ts;
  r.slice_id = slice;
  r.ue_id = ue;
  r.dl_buffer_bytes = buf;
  r.dl_tx_tbs = tbs;
  return r;
}

RewardWeights weights(double tb_ref, double buf_ref) {
  RewardWeights w;
  w.tb_ref = tb_ref;
  w.buf_ref = buf_ref;
  return w;
}

// Broadband gets the first `bb_rbgs` of 17 RBGs, both slices round-robin.
ran::ControlDirective cut(int bb_rbgs) {
  ran::ControlDirective d;
  d.slice_allocation = std::map<ran::SliceId, ran::RbgRange>{{0, {0, bb_rbgs - 1}}, {1, {bb_rbgs, 16}}};
  d.slice_scheduling_policy = std::vector<int>{0, 0};
  return d;
}

}  // namespace

TEST_CASE("reward saturating examples and bounds") {
  const auto w = weights(100.0, 5000.0);
  CHECK(reward_value(100.0, 0.0, w) == doctest::Approx(0.5));
  CHECK(reward_value(0.0, 5000.0, w) == doctest::Approx(-0.5));
  CHECK(reward_value(1e9, 0.0, w) == doctest::Approx(0.5));
  CHECK(reward_value(0.0, 1e12, w) == doctest::Approx(-0.5));

  // Monotone over a grid, bounded by [-1, 1] for any weights.
  for (double wt : {0.0, 0.3, 0.5, 1.0}) {
    RewardWeights g = weights(100.0, 5000.0);
    g.w_thr = wt;
    g.w_buf = 1.0 - wt;
    for (double buf = 0.0; buf <= 8000.0; buf += 500.0) {
      double prev = -2.0;
      for (double tbs = 0.0; tbs <= 160.0; tbs += 10.0) {
        const double r = reward_value(tbs, buf, g);
        CHECK(r >= prev);
        CHECK(r >= -1.0);
        CHECK(r <= 1.0);
        prev = r;
      }
    }
    for (double tbs = 0.0; tbs <= 160.0; tbs += 20.0) {
      double prev = 2.0;
      for (double buf = 0.0; buf <= 8000.0; buf += 250.0) {
        const double r = reward_value(tbs, buf, g);
        CHECK(r <= prev);
        prev = r;
      }
    }
  }
}

TEST_CASE("compute_reward averages slice totals per window") {
  // Two windows; broadband TBs 60+40=100 then 100, time-sensitive buffer
  // 1000+1500=2500 then 2500 -> per-window means 100 and 2500.
  const std::vector<ran::KpmRecord> records{rec(100, 0, 1, 0, 60), rec(100, 0, 2, 0, 40), rec(100, 1, 3, 1000, 5),
                                            rec(100, 1, 4, 1500, 5), rec(200, 0, 1, 0, 50), rec(200, 0, 2, 0, 50),
                                            rec(200, 1, 3, 2000, 5), rec(200, 1, 4, 500, 5)};
  const auto m = epoch_metrics(records, 0, 1);
  CHECK(m.windows == 2);
  CHECK(m.broadband_tbs == 100.0);
  CHECK(m.timesensitive_buffer == 2500.0);
  CHECK(compute_reward(records, weights(200.0, 5000.0), 0, 1) == doctest::Approx(0.5 * 0.5 - 0.5 * 0.5));

  CHECK(code_of([&] { compute_reward(records, weights(1, 1), 0, 7); }) == ErrorCode::kMissingSlice);
  CHECK(code_of([&] { compute_reward(records, weights(1, 1), 9, 1); }) == ErrorCode::kMissingSlice);
  RewardWeights bad = weights(1, 1);
  bad.w_thr = 0.7;
  CHECK(code_of([&] { compute_reward(records, bad, 0, 1); }) == ErrorCode::kInvalidValue);
  CHECK(code_of([&] { compute_reward(records, weights(0, 1), 0, 1); }) == ErrorCode::kInvalidValue);
}

TEST_CASE("gradients match central finite differences on 20 random nets") {
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto r = testing::gradient_check(seed);
    INFO("seed " << seed << " mlp " << r.mlp << " surrogate " << r.surrogate << " value " << r.value);
    CHECK(r.worst() <= 1e-4);
    worst = std::max(worst, r.worst());
  }
  MESSAGE("max relative error " << worst);
}

TEST_CASE("network shape and softmax") {
  const auto net = Mlp::standard(6, 72, 3);
  REQUIRE(net.sizes() == std::vector<int>{6, 30, 30, 30, 30, 30, 72});
  CHECK(net.params().size() == 6 * 30 + 30 + 4 * (30 * 30 + 30) + 30 * 72 + 72);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n(0.0, 30.0);
  for (int i = 0; i < 100; ++i) {
    std::vector<double> logits(72);
    for (auto& l : logits) l = n(rng);
    double sum = 0.0;
    for (double p : softmax(logits)) sum += p;
    CHECK(std::abs(sum - 1.0) <= 1e-9);
  }
  CHECK(code_of([&] { net.forward(std::vector<double>(5, 0.0)); }) == ErrorCode::kInvalidValue);
}

TEST_CASE("act: uniform net is greedy on action 0 and sampling matches probabilities") {
  PpoAgent fresh(6, 9);
  const xapp::FeatureVector f{10, 0, 100, 2, 5000, 20};
  for (double p : fresh.probabilities(f)) CHECK(p == doctest::Approx(1.0 / 9).epsilon(1e-12));
  CHECK(fresh.act(f, ActMode::kGreedy).action == 0);

  PpoConfig cfg;
  cfg.seed = 11;
  PpoAgent agent(6, 9, cfg);
  std::mt19937_64 rng(77);
  std::normal_distribution<double> n(0.0, 0.5);
  auto& p = agent.actor().params();
  for (std::size_t i = agent.actor().output_layer_offset(); i < p.size(); ++i) p[i] = n(rng);
  const auto probs = agent.probabilities(f);
  double sum = 0.0;
  for (double q : probs) sum += q;
  CHECK(std::abs(sum - 1.0) <= 1e-9);

  const int draws = 100000;
  std::vector<int> counts(9, 0);
  for (int i = 0; i < draws; ++i) ++counts[static_cast<std::size_t>(agent.act(f, ActMode::kSample).action)];
  for (std::size_t k = 0; k < 9; ++k) {
    const double mean = draws * probs[k];
    const double sigma = std::sqrt(draws * probs[k] * (1 - probs[k]));
    INFO("action " << k << " count " << counts[k] << " expected " << mean);
    CHECK(std::abs(counts[k] - mean) <= 3 * sigma);
  }
  const auto greedy = agent.act(f, ActMode::kGreedy).action;
  CHECK(probs[static_cast<std::size_t>(greedy)] == *std::max_element(probs.begin(), probs.end()));
}

TEST_CASE("ppo update: zero advantage leaves the actor unchanged") {
  PpoAgent agent(6, 9);
  Trajectory traj;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 100.0);
  for (int t = 0; t < 16; ++t) {
    xapp::FeatureVector f(6);
    for (auto& x : f) x = u(rng);
    const auto a = agent.act(f, ActMode::kSample);
    traj.push_back(Transition{f, a.action, u(rng) / 100.0, 0.0, a.log_prob, t == 15});
  }
  // Value estimates equal to the returns make every advantage exactly 0.
  const auto g = discounted_returns(traj, 0.99);
  for (std::size_t i = 0; i < traj.size(); ++i) traj[i].value = g[i];
  const auto actor_before = agent.actor().params();
  const auto critic_before = agent.critic().params();
  agent.update(traj);
  CHECK(agent.actor().params() == actor_before);
  CHECK(agent.critic().params() != critic_before);
}

TEST_CASE("ppo update: discounted returns restart at episode boundaries") {
  Trajectory t(4);
  t[0].reward = 1;
  t[1].reward = 2;
  t[1].episode_end = true;
  t[2].reward = 3;
  t[3].reward = 4;
  t[3].episode_end = true;
  const auto g = discounted_returns(t, 0.5);
  CHECK(g == std::vector<double>{2.0, 2.0, 5.0, 4.0});
}

TEST_CASE("ppo update: non-finite gradients abort and restore the nets") {
  PpoAgent agent(6, 9);
  Trajectory good;
  for (int t = 0; t < 16; ++t) {
    xapp::FeatureVector f{1.0 * t, 2, 3, 4, 5, 6};
    const auto a = agent.act(f, ActMode::kSample);
    good.push_back(Transition{f, a.action, 0.1 * t, a.value, a.log_prob, t == 15});
  }
  agent.update(good);
  const auto actor = agent.actor().params();
  const auto critic = agent.critic().params();

  Trajectory nan_reward = good;
  nan_reward[3].reward = std::nan("");
  CHECK(code_of([&] { agent.update(nan_reward); }) == ErrorCode::kNonFiniteGradient);
  CHECK(agent.actor().params() == actor);
  CHECK(agent.critic().params() == critic);

  Trajectory nan_features = good;
  nan_features[7].features[2] = std::nan("");
  CHECK(code_of([&] { agent.update(nan_features); }) == ErrorCode::kNonFiniteGradient);
  CHECK(agent.actor().params() == actor);
  CHECK(agent.critic().params() == critic);

  // The optimizer state was restored too: the same good update from here
  // matches a twin that never saw the bad batches.
  PpoAgent twin(6, 9);
  for (int t = 0; t < 16; ++t) twin.act(good[static_cast<std::size_t>(t)].features, ActMode::kSample);
  twin.update(good);
  REQUIRE(twin.actor().params() == actor);
  Trajectory incomplete = good;
  incomplete.back().episode_end = false;
  CHECK(code_of([&] { agent.update(incomplete); }) == ErrorCode::kInvalidValue);
}

TEST_CASE("frozen environment is deterministic and resets to the snapshot") {
  const auto sc = frozen_two_slice_scenario();
  CHECK(sc.weights.tb_ref == 600.0);  // 6 saturated UEs on 8 RBGs, round-robin: 6 TBs per TTI
  CHECK(sc.weights.buf_ref > 1.0);
  const auto space = xapp::ActionSpace::joint({0, 1}, 17, sc.config.slice_allocation);
  SliceEnv env(sc, enumerate(space, sc.config.bs_id));
  CHECK(env.action_count() == 72);
  CHECK(env.feature_dim() == 6);

  std::mt19937_64 rng(9);
  std::vector<int> actions;
  for (int i = 0; i < 16; ++i) actions.push_back(std::uniform_int_distribution<int>(0, 71)(rng));
  auto run = [&] {
    std::vector<double> rewards;
    env.reset();
    for (int a : actions) rewards.push_back(env.step(a).reward);
    return rewards;
  };
  const auto first = run();
  CHECK(run() == first);
  CHECK(env.steps_taken() == 16);
  CHECK(code_of([&] { env.step(72); }) == ErrorCode::kInvalidValue);
}

TEST_CASE("oracle: trivial spaces, too large, and the larger broadband share wins") {
  const auto sat = saturated_two_slice_scenario();
  // One action.
  const auto one = oracle_policy(sat, std::vector<ran::ControlDirective>{cut(8)});
  CHECK(one.best == 0);
  CHECK(one.values.size() == 1);

  // Round-robin over 6 saturated UEs grants min(rbgs, 6) TBs per TTI and the
  // saturated time-sensitive buffer stays pinned near its refill level, so
  // 8 RBGs beat 2.
  const auto two = oracle_policy(sat, std::vector<ran::ControlDirective>{cut(2), cut(8)});
  CHECK(two.best == 1);
  CHECK(two.metrics[0].broadband_tbs == 2 * 100.0);
  CHECK(two.metrics[1].broadband_tbs == 6 * 100.0);
  CHECK(two.metrics[0].timesensitive_buffer == doctest::Approx(two.metrics[1].timesensitive_buffer).epsilon(1e-3));
  CHECK(two.values[1] > two.values[0]);

  const std::vector<ran::ControlDirective> many(1001, cut(8));
  CHECK(code_of([&] { oracle_policy(sat, many); }) == ErrorCode::kActionSpaceTooLarge);
  const auto joint = xapp::ActionSpace::joint({0, 1, 2, 3, 4}, 17, {});
  CHECK(code_of([&] { oracle_policy(sat, joint); }) == ErrorCode::kActionSpaceTooLarge);
}

TEST_CASE("oracle: joint space dominates the scheduling-only space") {
  const auto sc = frozen_two_slice_scenario();
  const auto sched = xapp::ActionSpace::sched_only({0, 1});
  const auto joint = xapp::ActionSpace::joint({0, 1}, 17, sc.config.slice_allocation);
  const auto os = oracle_policy(sc, sched);
  const auto oj = oracle_policy(sc, joint);
  REQUIRE(os.values.size() == 9);
  REQUIRE(oj.values.size() == 72);

  // Tie-break: the best id is the first maximum.
  for (const auto* o : {&os, &oj}) {
    const auto it = std::max_element(o->values.begin(), o->values.end());
    CHECK(o->best == it - o->values.begin());
  }
  CHECK(oj.values[static_cast<std::size_t>(oj.best)] >= os.values[static_cast<std::size_t>(os.best)]);
  const auto& mj = oj.metrics[static_cast<std::size_t>(oj.best)];
  const auto& ms = os.metrics[static_cast<std::size_t>(os.best)];
  CHECK(mj.broadband_tbs >= ms.broadband_tbs);
  CHECK(mj.timesensitive_buffer <= ms.timesensitive_buffer);

  // Superset: every sched-only action is the joint action with the base
  // partition and the same policies.
  int base_partition = -1;
  for (std::size_t i = 0; i < joint.partitions().size(); ++i) {
    if (joint.partitions()[i] == sc.config.slice_allocation) base_partition = static_cast<int>(i);
  }
  REQUIRE(base_partition >= 0);
  for (int a = 0; a < 9; ++a) {
    CHECK(oj.values[static_cast<std::size_t>(base_partition * 9 + a)] == os.values[static_cast<std::size_t>(a)]);
  }

  // sched xApp with the oracle plugged in plays the oracle's argmax.
  xapp::SpaceModel model(sched, std::make_unique<OraclePolicy>(os), sc.config.bs_id);
  const auto d = model.decide({});
  REQUIRE(d.has_value());
  CHECK(d->action_id == os.best);
  CHECK(d->directive == sched.decode(os.best, sc.config.bs_id));
}

TEST_CASE("trained greedy action matches the oracle on a 2-action scenario") {
  const auto sat = saturated_two_slice_scenario();
  const std::vector<ran::ControlDirective> actions{cut(2), cut(8)};
  const auto oracle = oracle_policy(sat, actions);
  for (std::uint64_t seed : {1, 2, 3}) {
    SliceEnv env(sat, actions);
    PpoConfig cfg;
    cfg.seed = seed;
    PpoAgent agent(env.feature_dim(), env.action_count(), cfg);
    train_ppo(agent, env, 100);
    const auto f = env.reset();
    const auto probs = agent.probabilities(f);
    INFO("seed " << seed << " p(best) " << probs[static_cast<std::size_t>(oracle.best)]);
    CHECK(agent.act(f, ActMode::kGreedy).action == oracle.best);
  }
}

TEST_CASE("training is reproducible and logs csv; checkpoints round-trip") {
  const auto sc = frozen_two_slice_scenario();
  const auto space = xapp::ActionSpace::sched_only({0, 1});
  SliceEnv env(sc, enumerate(space, sc.config.bs_id));
  PpoConfig cfg;
  cfg.seed = 4;
  PpoAgent a(env.feature_dim(), env.action_count(), cfg);
  PpoAgent b(env.feature_dim(), env.action_count(), cfg);
  std::ostringstream log_a;
  std::ostringstream log_b;
  const auto ra = train_ppo(a, env, 8, &log_a);
  const auto rb = train_ppo(b, env, 8, &log_b);
  CHECK(ra.episode_rewards == rb.episode_rewards);
  CHECK(log_a.str() == log_b.str());
  CHECK(a.actor().params() == b.actor().params());

  std::istringstream lines(log_a.str());
  std::string line;
  std::getline(lines, line);
  CHECK(line == "episode,mean_reward,actor_loss,critic_loss");
  int rows = 0;
  while (std::getline(lines, line)) ++rows;
  CHECK(rows == 8);

  const auto path = (std::filesystem::temp_directory_path() / "orgym_agent_ckpt.json").string();
  a.save(path);
  auto loaded = PpoAgent::load(path);
  CHECK(loaded.actor().params() == a.actor().params());
  CHECK(loaded.critic().params() == a.critic().params());
  const auto f = env.reset();
  CHECK(loaded.probabilities(f) == a.probabilities(f));
  CHECK(loaded.value(f) == a.value(f));

  auto j = a.to_json();
  j["version"] = 99;
  CHECK(code_of([&] { PpoAgent::from_json(j); }) == ErrorCode::kSchemaMismatch);
  j = a.to_json();
  j["actor"]["shapes"][0][0] = 31;
  CHECK(code_of([&] { PpoAgent::from_json(j); }) == ErrorCode::kSchemaMismatch);
  std::filesystem::remove(path);
}

TEST_CASE("ppo beats the uniform-random policy over 10 seeds") {
  const auto trial = testing::ppo_vs_random();
  for (std::size_t i = 0; i < trial.trained.size(); ++i) {
    MESSAGE("seed " << i + 1 << " trained " << trial.trained[i] << " random " << trial.random[i]);
  }
  MESSAGE("mean diff " << trial.mean_diff << " t " << trial.t_stat);
  CHECK(trial.significant());
}
