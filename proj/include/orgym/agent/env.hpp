// SPDX-License-Identifier: Apache-2.0
// Frozen-scenario environment: every episode restarts from one warmed-up
// snapshot of a cell, so identical action sequences give identical rewards.
#pragma once

#include <string>
#include <vector>

#include "orgym/agent/reward.hpp"
#include "orgym/ran/cell.hpp"
#include "orgym/xapp/action_space.hpp"
#include "orgym/xapp/features.hpp"

namespace orgym::agent {

struct FrozenScenario {
  ran::ScenarioConfig config;  // base slicing is the even split
  ran::SliceId broadband = 0;
  ran::SliceId timesensitive = 1;
  int warmup_ms = 1000;
  int epoch_ms = 400;  // one decision epoch: 4 KPM windows
  int horizon = 16;    // decisions per episode
  int feature_windows = xapp::kDefaultWindowCount;
  RewardWeights weights;
};

// 17 RBGs split 8/9. Slice 0 holds 6 saturated broadband UEs, slice 1 two
// 5 Mbps CBR UEs that the even split cannot keep up with. Weights are
// calibrated.
FrozenScenario frozen_two_slice_scenario(std::uint64_t seed = 1);

// Same cell with saturated time-sensitive UEs: the buffer term is constant
// and only the broadband share matters.
FrozenScenario saturated_two_slice_scenario(std::uint64_t seed = 1);

// tb_ref and buf_ref from running the base config for one episode from the
// snapshot, each floored at 1. Keeps the existing w_thr/w_buf.
RewardWeights calibrate(const FrozenScenario& scenario);

// Decodes every action id against the scenario's node.
std::vector<ran::ControlDirective> enumerate(const xapp::ActionSpace& space, const std::string& target);

class SliceEnv {
 public:
  struct Step {
    xapp::FeatureVector features;
    double reward = 0.0;
    bool done = false;
    EpochMetrics metrics;
    std::vector<ran::KpmRecord> records;
  };

  SliceEnv(FrozenScenario scenario, std::vector<ran::ControlDirective> actions);

  xapp::FeatureVector reset();
  // Applies action `id` at the start of the epoch and runs it. Throws
  // Error(kInvalidValue) for an unknown id and the cell's error for a
  // rejected directive.
  Step step(int action);

  int action_count() const { return static_cast<int>(actions_.size()); }
  int feature_dim() const { return static_cast<int>(initial_features_.size()); }
  int steps_taken() const { return t_; }
  const FrozenScenario& scenario() const { return scenario_; }
  const ran::Cell& cell() const { return cell_; }

 private:
  std::vector<ran::KpmRecord> run_epoch();

  FrozenScenario scenario_;
  std::vector<ran::ControlDirective> actions_;
  std::vector<ran::SliceId> slices_;
  ran::Cell snapshot_;
  xapp::WindowStore snapshot_store_;
  xapp::FeatureVector initial_features_;
  ran::Cell cell_;
  xapp::WindowStore store_;
  int t_ = 0;
};

inline constexpr int kMaxOracleActions = 1000;

struct OracleResult {
  int best = 0;
  std::vector<double> values;         // reward per action id
  std::vector<EpochMetrics> metrics;  // per action id, over the whole horizon
};

// Holds each action for the full horizon from the snapshot and scores the
// horizon's records with compute_reward. Ties go to the lowest id. Throws
// Error(kActionSpaceTooLarge) beyond kMaxOracleActions.
OracleResult oracle_policy(const FrozenScenario& scenario, const std::vector<ran::ControlDirective>& actions);
OracleResult oracle_policy(const FrozenScenario& scenario, const xapp::ActionSpace& space);

}  // namespace orgym::agent
