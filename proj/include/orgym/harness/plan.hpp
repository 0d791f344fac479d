// SPDX-License-Identifier: Apache-2.0
// Experiment plans: stations, a timeline of operator actions and xApp
// starts, and the catalog of slicing experiments.
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "orgym/ran/types.hpp"
#include "orgym/xapp/xapp.hpp"

namespace orgym::harness {

enum class EventKind { kApplyAllocation, kStartXapp };

struct TimelineEvent {
  std::int64_t at_ms = 0;
  EventKind kind = EventKind::kApplyAllocation;
  ran::ControlDirective directive;  // kApplyAllocation; empty target = first station
  std::string xapp_id;              // kStartXapp
};

enum class XappKind { kPrioritize, kSched, kSchedSlicing };

struct XappPlan {
  xapp::XAppDescriptor descriptor;
  XappKind kind = XappKind::kPrioritize;
  ran::SliceId target_slice = 0;  // prioritize
  double boost_share = 0.6;       // prioritize
  // sched kinds: "constant:<id>", "noop" or "checkpoint:<path>" (greedy).
  std::string policy = "noop";
};

struct ExperimentPlan {
  std::string name;
  std::vector<ran::ScenarioConfig> stations;
  std::vector<TimelineEvent> timeline;
  std::vector<XappPlan> xapps;
  std::int64_t duration_ms = 0;
  std::string output_dir;
};

std::string to_string(EventKind kind);
std::string to_string(XappKind kind);

// output_dir is left out when include_output is false, so two runs of one
// plan write identical config.json files.
nlohmann::json plan_to_json(const ExperimentPlan& plan, bool include_output = true);
// Throws Error(kMalformedJson) or Error(kInvalidValue).
ExperimentPlan plan_from_json(const nlohmann::json& j);
ExperimentPlan parse_plan(const std::string& text);
ExperimentPlan load_plan(const std::string& path);

// Throws Error(kTimelineConflict) for out-of-order or out-of-range events,
// unknown stations, slices or xApps, xApps started twice and allocations
// that do not merge onto the table in force at that point.
void validate_plan(const ExperimentPlan& plan);

// Percentages (summing to 100) to contiguous RBG ranges in the given order.
// The first slice rounds halves up, the others to nearest, the last takes
// the remainder: 50/50 over 17 RBGs is 9/8.
std::map<ran::SliceId, ran::RbgRange> percent_allocation(const std::vector<std::pair<ran::SliceId, double>>& percents,
                                                         int rbg_count);

// Slice A 75/50/25 %, slice B 25/50/75 %, one minute each.
ExperimentPlan build_stairs_plan();
// Slice A 75/25/75 %, slice B 25/75/25 %.
ExperimentPlan build_v_plan();
// Three slices on 5 RBGs each for 150 s, then the prioritizing xApp boosts
// slice 0 to 60 % of the cell. 300 s.
ExperimentPlan build_prioritization_plan();

// "stairs", "v" or "prioritize"; Error(kInvalidValue) otherwise.
ExperimentPlan build_plan(const std::string& name);

}  // namespace orgym::harness
