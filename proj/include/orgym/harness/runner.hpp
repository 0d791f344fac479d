// SPDX-License-Identifier: Apache-2.0
// Executes an experiment plan against a RIC, its base stations and xApps.
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "orgym/harness/plan.hpp"
#include "orgym/harness/summary.hpp"
#include "orgym/ran/config.hpp"
#include "orgym/xapp/xapp.hpp"

namespace orgym::harness {

struct RunOptions {
  std::optional<std::uint64_t> seed;  // station i runs with seed + i
  std::string output_dir;             // overrides the plan's when set
  bool net = false;                   // TCP on 127.0.0.1 instead of the loopback bus
  double net_speed = 1.0;             // TCP mode: simulated ms per wall-clock ms
};

struct RunResult {
  std::string dir;
  std::int64_t simulated_ms = 0;
  std::map<std::string, std::vector<xapp::EpochRecord>> epochs;  // by xApp id
  RunSummary summary;
};

// Builds the decision model an xApp plan describes for its station.
std::unique_ptr<xapp::DecisionModel> make_model(const XappPlan& plan, const ran::ScenarioConfig& station);

// Writes config.json, kpm/<bs_id>.csv, xapp/<xapp_id>.csv, ric.log.jsonl,
// summary.json and meta.json (the only file with wall-clock values).
// Throws Error(kTimelineConflict) before anything is written for a bad
// plan, Error(kComponentCrash) when a component fails mid-run; outputs
// written so far are kept.
RunResult run_experiment(const ExperimentPlan& plan, const RunOptions& options = {});

}  // namespace orgym::harness
