// SPDX-License-Identifier: Apache-2.0
#include "orgym/agent/env.hpp"

#include <algorithm>

#include "orgym/common/error.hpp"

namespace orgym::agent {
namespace {

ran::ScenarioConfig two_slice_config(std::uint64_t seed, bool saturated_ts) {
  ran::ScenarioConfig cfg;
  cfg.network_slicing = true;
  cfg.rbg_count = 17;
  cfg.slice_allocation = {{0, {0, 7}}, {1, {8, 16}}};
  cfg.slice_scheduling_policy = {0, 0};
  cfg.slice_users = {{0, {1, 2, 3, 4, 5, 6}}, {1, {7, 8}}};
  for (int id = 1; id <= 6; ++id) cfg.ues.push_back(ran::UeSpec{id, 1000.0, 0.0, true});
  for (int id = 7; id <= 8; ++id) cfg.ues.push_back(ran::UeSpec{id, 1000.0, 5e6, saturated_ts});
  cfg.seed = seed;
  return cfg;
}

// Drives a cell for `ms`, feeding closed windows to the store.
std::vector<ran::KpmRecord> advance(ran::Cell& cell, xapp::WindowStore& store, int ms) {
  std::vector<ran::KpmRecord> out;
  const int ttis = ms / cell.config().tti_ms;
  for (int i = 0; i < ttis; ++i) {
    cell.step();
    if (cell.window_due()) {
      auto w = cell.emit_kpm_window();
      store.add(w);
      out.insert(out.end(), w.begin(), w.end());
    }
  }
  return out;
}

}  // namespace

FrozenScenario frozen_two_slice_scenario(std::uint64_t seed) {
  FrozenScenario s;
  s.config = two_slice_config(seed, false);
  s.weights = calibrate(s);
  return s;
}

FrozenScenario saturated_two_slice_scenario(std::uint64_t seed) {
  FrozenScenario s;
  s.config = two_slice_config(seed, true);
  s.weights = calibrate(s);
  return s;
}

RewardWeights calibrate(const FrozenScenario& scenario) {
  ran::Cell cell(scenario.config);
  xapp::WindowStore store;
  advance(cell, store, scenario.warmup_ms);
  const auto records = advance(cell, store, scenario.epoch_ms * scenario.horizon);
  const auto m = epoch_metrics(records, scenario.broadband, scenario.timesensitive);
  RewardWeights w = scenario.weights;
  w.tb_ref = std::max(1.0, m.broadband_tbs);
  w.buf_ref = std::max(1.0, m.timesensitive_buffer);
  return w;
}

std::vector<ran::ControlDirective> enumerate(const xapp::ActionSpace& space, const std::string& target) {
  std::vector<ran::ControlDirective> out;
  out.reserve(static_cast<std::size_t>(space.size()));
  for (int id = 0; id < space.size(); ++id) out.push_back(space.decode(id, target));
  return out;
}

SliceEnv::SliceEnv(FrozenScenario scenario, std::vector<ran::ControlDirective> actions)
    : scenario_(std::move(scenario)),
      actions_(std::move(actions)),
      snapshot_(scenario_.config),
      cell_(scenario_.config) {
  if (actions_.empty()) throw Error(ErrorCode::kInvalidValue, "actions", "action list is empty");
  if (scenario_.epoch_ms % scenario_.config.kpm_window_ms != 0 || scenario_.epoch_ms <= 0) {
    throw Error(ErrorCode::kInvalidValue, "epoch_ms", "must be a positive multiple of the KPM window");
  }
  validate(scenario_.weights);
  slices_ = {scenario_.broadband, scenario_.timesensitive};
  std::sort(slices_.begin(), slices_.end());
  advance(snapshot_, snapshot_store_, scenario_.warmup_ms);
  initial_features_ = xapp::window_features(snapshot_store_, scenario_.feature_windows, slices_);
  reset();
}

xapp::FeatureVector SliceEnv::reset() {
  cell_ = snapshot_;
  store_ = snapshot_store_;
  t_ = 0;
  return initial_features_;
}

std::vector<ran::KpmRecord> SliceEnv::run_epoch() { return advance(cell_, store_, scenario_.epoch_ms); }

SliceEnv::Step SliceEnv::step(int action) {
  if (action < 0 || action >= action_count()) {
    throw Error(ErrorCode::kInvalidValue, "action", "action id " + std::to_string(action) + " out of range");
  }
  const auto outcome = cell_.apply_control(actions_[static_cast<std::size_t>(action)]);
  if (!outcome.applied && outcome.issue) throw outcome.issue->to_error();
  Step s;
  s.records = run_epoch();
  s.metrics = epoch_metrics(s.records, scenario_.broadband, scenario_.timesensitive);
  s.reward = reward_value(s.metrics.broadband_tbs, s.metrics.timesensitive_buffer, scenario_.weights);
  s.features = xapp::window_features(store_, scenario_.feature_windows, slices_);
  ++t_;
  s.done = t_ >= scenario_.horizon;
  return s;
}

OracleResult oracle_policy(const FrozenScenario& scenario, const std::vector<ran::ControlDirective>& actions) {
  if (static_cast<int>(actions.size()) > kMaxOracleActions) {
    throw Error(ErrorCode::kActionSpaceTooLarge, "actions",
                std::to_string(actions.size()) + " actions exceed " + std::to_string(kMaxOracleActions));
  }
  SliceEnv env(scenario, actions);
  OracleResult result;
  for (int a = 0; a < env.action_count(); ++a) {
    env.reset();
    std::vector<ran::KpmRecord> all;
    for (int t = 0; t < scenario.horizon; ++t) {
      auto s = env.step(a);
      all.insert(all.end(), s.records.begin(), s.records.end());
    }
    result.values.push_back(compute_reward(all, scenario.weights, scenario.broadband, scenario.timesensitive));
    result.metrics.push_back(epoch_metrics(all, scenario.broadband, scenario.timesensitive));
    if (result.values.back() > result.values[static_cast<std::size_t>(result.best)]) result.best = a;
  }
  return result;
}

OracleResult oracle_policy(const FrozenScenario& scenario, const xapp::ActionSpace& space) {
  if (space.size() > kMaxOracleActions) {
    throw Error(ErrorCode::kActionSpaceTooLarge, "actions",
                std::to_string(space.size()) + " actions exceed " + std::to_string(kMaxOracleActions));
  }
  return oracle_policy(scenario, enumerate(space, scenario.config.bs_id));
}

}  // namespace orgym::agent
