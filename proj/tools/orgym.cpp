// SPDX-License-Identifier: Apache-2.0
// orgym command-line front end.
#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "orgym/agent/env.hpp"
#include "orgym/agent/ppo.hpp"
#include "orgym/common/error.hpp"
#include "orgym/common/log.hpp"
#include "orgym/harness/plan.hpp"
#include "orgym/harness/replay.hpp"
#include "orgym/harness/runner.hpp"
#include "orgym/harness/summary.hpp"

using namespace orgym;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::kComponentCrash:
    case ErrorCode::kIo:
    case ErrorCode::kTimeout:
    case ErrorCode::kNonFiniteGradient:
      return kExitRuntime;
    default:
      return kExitValidation;
  }
}

void print_row(std::ostream& out, std::int64_t ts, const std::vector<double>& values) {
  out << ts;
  char buf[32];
  for (double v : values) {
    std::snprintf(buf, sizeof(buf), ",%.6f", v);
    out << buf;
  }
  out << '\n';
}

int cmd_run(const std::string& plan_path, std::optional<std::uint64_t> seed, bool net, const std::string& out) {
  auto plan = harness::load_plan(plan_path);
  harness::RunOptions o;
  o.seed = seed;
  o.net = net;
  o.output_dir = out;
  const auto result = harness::run_experiment(plan, o);
  std::cout << result.dir << '\n';
  return kExitOk;
}

int cmd_summarize(const std::string& dir) {
  const auto summary = harness::export_summary(dir);
  std::cout << harness::summary_to_json(summary).dump(2) << '\n';
  return kExitOk;
}

// xapp: one feature row per window once `windows` of history exist.
// train: one row per epoch of `per_epoch` windows with the epoch's reward.
int cmd_replay(const std::vector<std::string>& csvs, const std::string& into, int windows, int per_epoch,
               double speed, ran::SliceId broadband, ran::SliceId timesensitive, double tb_ref, double buf_ref) {
  harness::ReplayOptions opts{speed};
  xapp::WindowStore store;
  if (into == "xapp") {
    harness::replay_dataset(csvs, [&](const std::vector<ran::KpmRecord>& w) {
      store.add(w);
      if (store.window_count() < static_cast<std::size_t>(windows)) return;
      print_row(std::cout, w.front().ts_ms, xapp::window_features(store, windows));
    }, opts);
    return kExitOk;
  }

  struct Epoch {
    std::int64_t ts;
    std::vector<double> features;
    std::vector<ran::KpmRecord> records;
  };
  std::vector<Epoch> epochs;
  std::vector<ran::KpmRecord> pending;
  int count = 0;
  harness::replay_dataset(csvs, [&](const std::vector<ran::KpmRecord>& w) {
    store.add(w);
    pending.insert(pending.end(), w.begin(), w.end());
    if (++count % per_epoch != 0) return;
    if (store.window_count() >= static_cast<std::size_t>(windows)) {
      epochs.push_back({w.front().ts_ms, xapp::window_features(store, windows), pending});
    }
    pending.clear();
  }, opts);

  // Unset references come from the dataset's own means.
  if (tb_ref <= 0.0 || buf_ref <= 0.0) {
    std::vector<ran::KpmRecord> all;
    for (const auto& e : epochs) all.insert(all.end(), e.records.begin(), e.records.end());
    const auto m = agent::epoch_metrics(all, broadband, timesensitive);
    if (tb_ref <= 0.0) tb_ref = std::max(1.0, m.broadband_tbs);
    if (buf_ref <= 0.0) buf_ref = std::max(1.0, m.timesensitive_buffer);
  }
  agent::RewardWeights weights;
  weights.tb_ref = tb_ref;
  weights.buf_ref = buf_ref;
  agent::validate(weights);
  for (const auto& e : epochs) {
    auto row = e.features;
    row.push_back(agent::compute_reward(e.records, weights, broadband, timesensitive));
    print_row(std::cout, e.ts, row);
  }
  return kExitOk;
}

agent::FrozenScenario scenario_for(const std::string& name, std::uint64_t seed) {
  if (name == "frozen") return agent::frozen_two_slice_scenario(seed);
  if (name == "saturated") return agent::saturated_two_slice_scenario(seed);
  const auto plan = harness::load_plan(name);
  agent::FrozenScenario s;
  s.config = plan.stations.at(0);
  s.config.seed = seed;
  s.weights = agent::calibrate(s);
  return s;
}

int cmd_train(const std::string& scenario_name, int episodes, std::uint64_t seed, const std::string& space_name,
              const std::string& out) {
  if (episodes < 1) throw Error(ErrorCode::kInvalidValue, "episodes", "must be >= 1");
  const auto scenario = scenario_for(scenario_name, seed);
  std::vector<ran::SliceId> ids;
  for (const auto& [s, r] : scenario.config.slice_allocation) ids.push_back(s);
  xapp::ActionSpace space = space_name == "sched"
                                ? xapp::ActionSpace::sched_only(ids)
                                : xapp::ActionSpace::joint(ids, scenario.config.rbg_count,
                                                           scenario.config.slice_allocation);
  if (space_name != "sched" && space_name != "joint") {
    throw Error(ErrorCode::kInvalidValue, "space", "expected sched or joint");
  }
  agent::SliceEnv env(scenario, agent::enumerate(space, ""));
  agent::PpoConfig cfg;
  cfg.seed = seed;
  agent::PpoAgent net(env.feature_dim(), env.action_count(), cfg);

  fs::create_directories(out);
  std::ofstream log(fs::path(out) / "train_log.csv");
  if (!log) throw Error(ErrorCode::kIo, out, "cannot write train_log.csv");
  agent::train_ppo(net, env, episodes, &log);
  net.save((fs::path(out) / "checkpoint.json").string());

  const double trained = agent::evaluate_agent(net, env, 1, agent::ActMode::kGreedy);
  const double random = agent::evaluate_random(env, 10, seed + 1000);
  std::printf("actions %d, greedy reward %.6f, random reward %.6f\n", env.action_count(), trained, random);
  std::cout << (fs::path(out) / "checkpoint.json").string() << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"orgym: slicing RAN simulator, RIC and xApp harness"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run an experiment plan");
  std::string plan_path, out;
  std::optional<std::uint64_t> seed;
  bool net = false;
  run->add_option("plan", plan_path, "plan JSON")->required();
  run->add_option("--seed", seed, "base seed (station i gets seed + i)");
  run->add_flag("--net", net, "run over TCP instead of in-process loopback");
  run->add_option("--out", out, "output directory (overrides the plan)");

  auto* plan = app.add_subcommand("plan", "print a catalog plan");
  std::string plan_name;
  plan->add_option("name", plan_name)->required()->check(CLI::IsMember({"stairs", "v", "prioritize"}));

  auto* summarize = app.add_subcommand("summarize", "recompute summary.json for a run directory");
  std::string run_dir;
  summarize->add_option("run-dir", run_dir)->required();

  auto* replay = app.add_subcommand("replay", "replay KPM CSVs into feature or training rows");
  std::vector<std::string> csvs;
  std::string into;
  int windows = xapp::kDefaultWindowCount, per_epoch = 4;
  double speed = 0.0, tb_ref = 0.0, buf_ref = 0.0;
  int broadband = 0, timesensitive = 1;
  replay->add_option("csv", csvs)->required();
  replay->add_option("--into", into)->required()->check(CLI::IsMember({"xapp", "train"}));
  replay->add_option("--windows", windows, "feature history W")->check(CLI::PositiveNumber);
  replay->add_option("--epoch-windows", per_epoch, "windows per training epoch")->check(CLI::PositiveNumber);
  replay->add_option("--speed", speed, "pace relative to recorded time (0 = as fast as possible)");
  replay->add_option("--broadband", broadband);
  replay->add_option("--timesensitive", timesensitive);
  replay->add_option("--tb-ref", tb_ref, "reward TB reference (default: dataset mean)");
  replay->add_option("--buf-ref", buf_ref, "reward buffer reference (default: dataset mean)");

  auto* train = app.add_subcommand("train", "train a PPO agent on a frozen scenario");
  std::string scenario = "frozen", space = "joint", train_out = "train-out";
  int episodes = 200;
  std::uint64_t train_seed = 1;
  train->add_option("--scenario", scenario, "frozen, saturated or a plan JSON");
  train->add_option("--episodes", episodes);
  train->add_option("--seed", train_seed);
  train->add_option("--space", space)->check(CLI::IsMember({"sched", "joint"}));
  train->add_option("--out", train_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*run) return cmd_run(plan_path, seed, net, out);
    if (*plan) {
      std::cout << harness::plan_to_json(harness::build_plan(plan_name)).dump(2) << '\n';
      return kExitOk;
    }
    if (*summarize) return cmd_summarize(run_dir);
    if (*replay) {
      return cmd_replay(csvs, into, windows, per_epoch, speed, broadband, timesensitive, tb_ref, buf_ref);
    }
    if (*train) return cmd_train(scenario, episodes, train_seed, space, train_out);
  } catch (const Error& e) {
    std::cerr << "orgym: " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "orgym: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}
