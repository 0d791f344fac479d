// SPDX-License-Identifier: Apache-2.0
// Actor-critic PPO over an enumerated action space.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "orgym/agent/env.hpp"
#include "orgym/agent/mlp.hpp"
#include "orgym/xapp/model.hpp"

namespace orgym::agent {

struct PpoConfig {
  double clip = 0.2;
  double gamma = 0.99;
  int horizon = 16;  // decisions per rollout
  double lr = 3e-4;
  int update_epochs = 4;
  int minibatch = 16;
  std::uint64_t seed = 1;
};

enum class ActMode { kSample, kGreedy };

struct ActResult {
  int action = 0;
  double log_prob = 0.0;
  double value = 0.0;
  std::vector<double> probs;
};

struct Transition {
  xapp::FeatureVector features;
  int action = 0;
  double reward = 0.0;
  double value = 0.0;
  double log_prob = 0.0;
  bool episode_end = false;
};
using Trajectory = std::vector<Transition>;

struct UpdateStats {
  double actor_loss = 0.0;
  double critic_loss = 0.0;
};

// Network input: sign(x) * log1p(|x|), so Mbps, bytes and TB counts share a
// scale.
std::vector<double> encode_features(const xapp::FeatureVector& features);

// Numerically stable; sums to 1.
std::vector<double> softmax(const std::vector<double>& logits);

// Discounted returns, restarting at every episode_end.
std::vector<double> discounted_returns(const Trajectory& trajectory, double gamma);

struct ActorSample {
  std::vector<double> input;  // encoded
  int action = 0;
  double old_log_prob = 0.0;
  double advantage = 0.0;
};
struct CriticSample {
  std::vector<double> input;
  double target = 0.0;
};

// -mean(min(r A, clip(r, 1-eps, 1+eps) A)); adds its gradient to *grad.
double clipped_surrogate(const Mlp& actor, const std::vector<ActorSample>& batch, double clip,
                         std::vector<double>* grad);
// mean((V - target)^2); adds its gradient to *grad.
double value_loss(const Mlp& critic, const std::vector<CriticSample>& batch, std::vector<double>* grad);

class PpoAgent {
 public:
  PpoAgent(int feature_dim, int action_count, PpoConfig config = {});

  // kSample draws from the actor's distribution with the agent's RNG;
  // kGreedy takes the argmax, lowest id on ties.
  ActResult act(const xapp::FeatureVector& features, ActMode mode);
  std::vector<double> probabilities(const xapp::FeatureVector& features) const;
  double value(const xapp::FeatureVector& features) const;

  // Requires at least one complete episode. Throws Error(kNonFiniteGradient)
  // and restores both nets and optimizers when any gradient is not finite.
  UpdateStats update(const Trajectory& trajectory);

  Mlp& actor() { return actor_; }
  Mlp& critic() { return critic_; }
  const Mlp& actor() const { return actor_; }
  const Mlp& critic() const { return critic_; }
  const PpoConfig& config() const { return config_; }
  int feature_dim() const { return actor_.input_dim(); }
  int action_count() const { return actor_.output_dim(); }

  nlohmann::json to_json() const;
  static PpoAgent from_json(const nlohmann::json& j);
  void save(const std::string& path) const;
  static PpoAgent load(const std::string& path);

 private:
  PpoConfig config_;
  Mlp actor_;
  Mlp critic_;
  Adam actor_opt_;
  Adam critic_opt_;
  std::mt19937_64 rng_;
};

struct TrainResult {
  std::vector<double> episode_rewards;  // mean reward per decision
  std::vector<UpdateStats> updates;
};

// One update per episode. Log rows: episode,mean_reward,actor_loss,critic_loss.
TrainResult train_ppo(PpoAgent& agent, SliceEnv& env, int episodes, std::ostream* log = nullptr);

// Mean per-decision reward over `episodes` episodes.
double evaluate_agent(PpoAgent& agent, SliceEnv& env, int episodes, ActMode mode);
double evaluate_random(SliceEnv& env, int episodes, std::uint64_t seed);

// Action policies for the xApp SDK.
class NetPolicy : public xapp::ActionPolicy {
 public:
  NetPolicy(PpoAgent agent, ActMode mode) : agent_(std::move(agent)), mode_(mode) {}
  std::optional<int> select(const xapp::FeatureVector& features) override {
    return agent_.act(features, mode_).action;
  }

 private:
  PpoAgent agent_;
  ActMode mode_;
};

// Plays the oracle's argmax on every epoch.
class OraclePolicy : public xapp::ActionPolicy {
 public:
  explicit OraclePolicy(OracleResult result) : result_(std::move(result)) {}
  std::optional<int> select(const xapp::FeatureVector&) override { return result_.best; }
  const OracleResult& result() const { return result_; }

 private:
  OracleResult result_;
};

}  // namespace orgym::agent
