// SPDX-License-Identifier: Apache-2.0
#include "orgym/harness/plan.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "orgym/common/error.hpp"
#include "orgym/e2/messages.hpp"
#include "orgym/ran/config.hpp"
#include "orgym/ran/json_io.hpp"

namespace orgym::harness {
namespace {

using nlohmann::json;

constexpr std::int64_t kMinuteMs = 60000;

[[noreturn]] void conflict(const std::string& key, const std::string& detail) {
  throw Error(ErrorCode::kTimelineConflict, key, detail);
}

ran::ScenarioConfig saturated_cell(const std::map<ran::SliceId, std::vector<ran::UeId>>& users,
                                   std::map<ran::SliceId, ran::RbgRange> allocation) {
  ran::ScenarioConfig cfg;
  cfg.network_slicing = true;
  cfg.rbg_count = ran::kDefaultRbgCount;
  cfg.slice_allocation = std::move(allocation);
  cfg.slice_users = users;
  cfg.slice_scheduling_policy.assign(users.size(), 0);
  for (const auto& [slice, list] : users) {
    for (ran::UeId id : list) cfg.ues.push_back(ran::UeSpec{id, ran::kDefaultEfficiency, 0.0, true});
  }
  return cfg;
}

ExperimentPlan two_phase_switch(const std::string& name, const std::vector<double>& a_percents) {
  ExperimentPlan plan;
  plan.name = name;
  auto alloc = [](double a) { return percent_allocation({{0, a}, {1, 100.0 - a}}, ran::kDefaultRbgCount); };
  plan.stations.push_back(saturated_cell({{0, {1, 2}}, {1, {3, 4}}}, alloc(a_percents[0])));
  for (std::size_t i = 1; i < a_percents.size(); ++i) {
    TimelineEvent e;
    e.at_ms = static_cast<std::int64_t>(i) * kMinuteMs;
    e.kind = EventKind::kApplyAllocation;
    e.directive.target = plan.stations[0].bs_id;
    e.directive.slice_allocation = alloc(a_percents[i]);
    plan.timeline.push_back(std::move(e));
  }
  plan.duration_ms = static_cast<std::int64_t>(a_percents.size()) * kMinuteMs;
  plan.output_dir = "runs/" + name;
  return plan;
}

XappKind kind_from_string(const std::string& s) {
  if (s == "prioritize") return XappKind::kPrioritize;
  if (s == "sched") return XappKind::kSched;
  if (s == "sched-slicing") return XappKind::kSchedSlicing;
  throw Error(ErrorCode::kInvalidValue, "kind", "unknown xApp kind '" + s + "'");
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  auto it = j.find(key);
  return it == j.end() ? fallback : it->get<T>();
}

}  // namespace

std::string to_string(EventKind kind) {
  return kind == EventKind::kApplyAllocation ? "apply-allocation" : "start-xapp";
}

std::string to_string(XappKind kind) {
  switch (kind) {
    case XappKind::kPrioritize: return "prioritize";
    case XappKind::kSched: return "sched";
    case XappKind::kSchedSlicing: return "sched-slicing";
  }
  return "prioritize";
}

json plan_to_json(const ExperimentPlan& plan, bool include_output) {
  json out = json::object();
  out["name"] = plan.name;
  out["duration-ms"] = plan.duration_ms;
  json stations = json::array();
  for (const auto& s : plan.stations) stations.push_back(ran::config_to_json(s));
  out["stations"] = stations;
  json timeline = json::array();
  for (const auto& e : plan.timeline) {
    json ev{{"at-ms", e.at_ms}, {"action", to_string(e.kind)}};
    if (e.kind == EventKind::kApplyAllocation) {
      ev["directive"] = ran::directive_to_json(e.directive);
    } else {
      ev["xapp-id"] = e.xapp_id;
    }
    timeline.push_back(ev);
  }
  out["timeline"] = timeline;
  json xapps = json::array();
  for (const auto& x : plan.xapps) {
    json xj{{"kind", to_string(x.kind)}, {"descriptor", json::parse(xapp::descriptor_to_json(x.descriptor))}};
    if (x.kind == XappKind::kPrioritize) {
      xj["target-slice"] = x.target_slice;
      xj["boost-share"] = x.boost_share;
    } else {
      xj["policy"] = x.policy;
    }
    xapps.push_back(xj);
  }
  out["xapps"] = xapps;
  if (include_output) out["output-dir"] = plan.output_dir;
  return out;
}

ExperimentPlan plan_from_json(const json& j) {
  try {
    if (!j.is_object()) throw Error(ErrorCode::kMalformedJson, "", "plan must be a JSON object");
    ExperimentPlan plan;
    plan.name = get_or<std::string>(j, "name", "experiment");
    plan.duration_ms = j.at("duration-ms").get<std::int64_t>();
    plan.output_dir = get_or<std::string>(j, "output-dir", "runs/" + plan.name);
    for (const auto& s : j.at("stations")) plan.stations.push_back(ran::config_from_json(s));
    if (auto it = j.find("timeline"); it != j.end()) {
      for (const auto& ev : *it) {
        TimelineEvent e;
        e.at_ms = ev.at("at-ms").get<std::int64_t>();
        const auto action = ev.at("action").get<std::string>();
        if (action == "apply-allocation") {
          e.kind = EventKind::kApplyAllocation;
          e.directive = ran::directive_from_json(ev.at("directive"));
        } else if (action == "start-xapp") {
          e.kind = EventKind::kStartXapp;
          e.xapp_id = ev.at("xapp-id").get<std::string>();
        } else {
          throw Error(ErrorCode::kInvalidValue, "timeline.action", "unknown action '" + action + "'");
        }
        plan.timeline.push_back(std::move(e));
      }
    }
    if (auto it = j.find("xapps"); it != j.end()) {
      for (const auto& xj : *it) {
        XappPlan x;
        x.kind = kind_from_string(xj.at("kind").get<std::string>());
        x.descriptor = xapp::descriptor_from_json(xj.at("descriptor").dump());
        x.target_slice = get_or<int>(xj, "target-slice", 0);
        x.boost_share = get_or<double>(xj, "boost-share", 0.6);
        x.policy = get_or<std::string>(xj, "policy", "noop");
        plan.xapps.push_back(std::move(x));
      }
    }
    return plan;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedJson, "plan", e.what());
  }
}

ExperimentPlan parse_plan(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedJson, "plan", e.what());
  }
  return plan_from_json(j);
}

ExperimentPlan load_plan(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, path, "cannot open plan");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_plan(buf.str());
}

void validate_plan(const ExperimentPlan& plan) {
  if (plan.duration_ms <= 0) throw Error(ErrorCode::kInvalidValue, "duration-ms", "must be positive");
  if (plan.stations.empty()) throw Error(ErrorCode::kInvalidValue, "stations", "at least one station required");

  std::map<std::string, ran::SliceTable> tables;
  for (const auto& s : plan.stations) {
    if (auto issue = ran::validate_config(s)) throw issue->to_error();
    if (s.tti_ms != plan.stations[0].tti_ms) {
      throw Error(ErrorCode::kInvalidValue, "tti-ms", "all stations must share one TTI");
    }
    if (!tables.emplace(s.bs_id, s.slice_table()).second) {
      throw Error(ErrorCode::kInvalidValue, "bs-id", "duplicate station " + s.bs_id);
    }
  }
  auto station = [&](const std::string& target) -> const ran::ScenarioConfig& {
    if (target.empty()) return plan.stations[0];
    for (const auto& s : plan.stations) {
      if (s.bs_id == target) return s;
    }
    conflict("target", "no station " + target);
  };

  std::map<std::string, const XappPlan*> xapps;
  for (const auto& x : plan.xapps) {
    const auto& id = x.descriptor.xapp_id;
    if (id.empty() || !xapps.emplace(id, &x).second) conflict("xapps", "missing or duplicate xApp id '" + id + "'");
    if (x.descriptor.targets.empty()) conflict(id, "xApp has no target node");
    for (const auto& t : x.descriptor.targets) {
      const auto& cfg = station(t.str());
      if (x.kind == XappKind::kPrioritize && !cfg.slice_users.contains(x.target_slice) &&
          !cfg.slice_allocation.contains(x.target_slice)) {
        conflict(id, "target slice " + std::to_string(x.target_slice) + " not defined on " + t.str());
      }
      for (ran::SliceId s : x.descriptor.slices) {
        if (!cfg.slice_table().find(s)) conflict(id, "slice " + std::to_string(s) + " not defined on " + t.str());
      }
    }
  }

  std::int64_t last = 0;
  std::set<std::string> started;
  for (std::size_t i = 0; i < plan.timeline.size(); ++i) {
    const auto& e = plan.timeline[i];
    const std::string key = "timeline[" + std::to_string(i) + "]";
    if (e.at_ms < last) conflict(key, "events are not time-ordered");
    if (e.at_ms < 0 || e.at_ms >= plan.duration_ms) conflict(key, "event outside [0, duration)");
    last = e.at_ms;
    if (e.kind == EventKind::kStartXapp) {
      if (!xapps.contains(e.xapp_id)) conflict(key, "undefined xApp '" + e.xapp_id + "'");
      if (!started.insert(e.xapp_id).second) conflict(key, "xApp '" + e.xapp_id + "' started twice");
      continue;
    }
    const auto& cfg = station(e.directive.target);
    if (e.directive.empty()) conflict(key, "allocation event changes nothing");
    auto& table = tables.at(cfg.bs_id);
    if (e.directive.slice_allocation) {
      for (const auto& [slice, range] : *e.directive.slice_allocation) {
        if (!table.find(slice)) conflict(key, "undefined slice " + std::to_string(slice));
      }
    }
    ran::SliceTable merged;
    if (auto issue = ran::merge_directive(table, e.directive, cfg.rbg_count, merged)) {
      conflict(key, std::string(orgym::to_string(issue->code)) + ": " + issue->detail);
    }
    table = std::move(merged);
  }
}

std::map<ran::SliceId, ran::RbgRange> percent_allocation(const std::vector<std::pair<ran::SliceId, double>>& percents,
                                                         int rbg_count) {
  double total = 0.0;
  for (const auto& [id, p] : percents) {
    if (p < 0.0) throw Error(ErrorCode::kInvalidValue, "percent", "negative share");
    total += p;
  }
  if (percents.empty() || std::abs(total - 100.0) > 1e-9) {
    throw Error(ErrorCode::kInvalidValue, "percent", "shares must sum to 100");
  }
  std::map<ran::SliceId, ran::RbgRange> out;
  int next = 0;
  for (std::size_t i = 0; i < percents.size(); ++i) {
    const double exact = percents[i].second * rbg_count / 100.0;
    int n = 0;
    if (i + 1 == percents.size()) {
      n = rbg_count - next;
    } else if (i == 0) {
      n = static_cast<int>(std::floor(exact + 0.5));
    } else {
      n = static_cast<int>(std::ceil(exact - 0.5));
    }
    n = std::min(n, rbg_count - next);
    if (n < 1) throw Error(ErrorCode::kInvalidValue, "percent", "slice " + std::to_string(percents[i].first) +
                                                                   " rounds to zero RBGs");
    out[percents[i].first] = ran::RbgRange{next, next + n - 1};
    next += n;
  }
  return out;
}

ExperimentPlan build_stairs_plan() { return two_phase_switch("stairs", {75.0, 50.0, 25.0}); }

ExperimentPlan build_v_plan() { return two_phase_switch("v", {75.0, 25.0, 75.0}); }

ExperimentPlan build_prioritization_plan() {
  ExperimentPlan plan;
  plan.name = "prioritize";
  // 5 RBGs each keeps the three slices exactly even; RBGs 15 and 16 idle.
  plan.stations.push_back(saturated_cell({{0, {1, 2}}, {1, {3, 4}}, {2, {5, 6}}},
                                         {{0, {0, 4}}, {1, {5, 9}}, {2, {10, 14}}}));
  XappPlan x;
  x.kind = XappKind::kPrioritize;
  x.target_slice = 0;
  x.boost_share = 0.6;
  x.descriptor.xapp_id = "prioritize";
  x.descriptor.targets = {e2::NodeId(plan.stations[0].bs_id)};
  x.descriptor.report_period_ms = 250;
  x.descriptor.metric_set = e2::kpm_metric_names();
  x.descriptor.slices = {0, 1, 2};
  plan.xapps.push_back(x);
  TimelineEvent e;
  e.at_ms = 150000;
  e.kind = EventKind::kStartXapp;
  e.xapp_id = "prioritize";
  plan.timeline.push_back(e);
  plan.duration_ms = 300000;
  plan.output_dir = "runs/prioritize";
  return plan;
}

ExperimentPlan build_plan(const std::string& name) {
  if (name == "stairs") return build_stairs_plan();
  if (name == "v") return build_v_plan();
  if (name == "prioritize") return build_prioritization_plan();
  throw Error(ErrorCode::kInvalidValue, "plan", "unknown plan '" + name + "' (stairs|v|prioritize)");
}

}  // namespace orgym::harness
