// SPDX-License-Identifier: Apache-2.0
#include "orgym/ran/config.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "orgym/ran/json_io.hpp"

namespace orgym::ran {

const SliceEntry* SliceTable::find(SliceId id) const {
  for (const auto& s : slices) {
    if (s.id == id) return &s;
  }
  return nullptr;
}

SliceEntry* SliceTable::find(SliceId id) {
  for (auto& s : slices) {
    if (s.id == id) return &s;
  }
  return nullptr;
}

int AllocationMap::granted_to(UeId ue) const {
  return static_cast<int>(std::count(owner.begin(), owner.end(), ue));
}

SliceTable ScenarioConfig::slice_table() const {
  SliceTable table;
  if (!network_slicing) {
    SliceEntry all;
    all.id = 0;
    all.range = RbgRange{0, rbg_count - 1};
    all.policy = slice_scheduling_policy.empty() ? SchedPolicy::kRoundRobin
                                                 : static_cast<SchedPolicy>(slice_scheduling_policy[0]);
    for (const auto& ue : ues) all.ues.push_back(ue.id);
    std::sort(all.ues.begin(), all.ues.end());
    table.slices.push_back(std::move(all));
    return table;
  }
  std::size_t index = 0;
  for (const auto& [id, range] : slice_allocation) {
    SliceEntry entry;
    entry.id = id;
    entry.range = range;
    if (index < slice_scheduling_policy.size()) {
      entry.policy = static_cast<SchedPolicy>(slice_scheduling_policy[index]);
    }
    if (auto it = slice_users.find(id); it != slice_users.end()) entry.ues = it->second;
    std::sort(entry.ues.begin(), entry.ues.end());
    table.slices.push_back(std::move(entry));
    ++index;
  }
  return table;
}

std::optional<Issue> validate_allocation(const std::map<SliceId, RbgRange>& allocation, int rbg_count) {
  for (const auto& [id, range] : allocation) {
    const std::string key = "slice-allocation." + std::to_string(id);
    if (id < 0) return Issue{ErrorCode::kInvalidValue, key, "negative slice id"};
    if (range.first > range.last) {
      return Issue{ErrorCode::kRangeOutOfBounds, key, "first RBG after last RBG"};
    }
    if (range.first < 0 || range.last >= rbg_count) {
      return Issue{ErrorCode::kRangeOutOfBounds, key,
                   "range outside [0," + std::to_string(rbg_count - 1) + "]"};
    }
  }
  for (auto a = allocation.begin(); a != allocation.end(); ++a) {
    for (auto b = std::next(a); b != allocation.end(); ++b) {
      if (a->second.overlaps(b->second)) {
        const int shared = std::max(a->second.first, b->second.first);
        return Issue{ErrorCode::kOverlappingRbgRanges, "slice-allocation." + std::to_string(b->first),
                     "RBG " + std::to_string(shared) + " also claimed by slice " + std::to_string(a->first)};
      }
    }
  }
  return std::nullopt;
}

namespace {

std::optional<Issue> validate_policies(const std::vector<int>& codes, std::size_t slice_count) {
  if (codes.size() != slice_count) {
    return Issue{ErrorCode::kInvalidValue, "slice-scheduling-policy",
                 "expected " + std::to_string(slice_count) + " codes, got " + std::to_string(codes.size())};
  }
  for (std::size_t i = 0; i < codes.size(); ++i) {
    if (!is_known_policy(codes[i])) {
      return Issue{ErrorCode::kUnknownPolicyCode, "slice-scheduling-policy[" + std::to_string(i) + "]",
                   "code " + std::to_string(codes[i])};
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<Issue> validate_config(const ScenarioConfig& c) {
  if (c.rbg_count < 1) return Issue{ErrorCode::kInvalidValue, "rbg-count", "must be positive"};
  if (c.tti_ms < 1) return Issue{ErrorCode::kInvalidValue, "tti-ms", "must be positive"};
  if (c.kpm_window_ms < c.tti_ms || c.kpm_window_ms % c.tti_ms != 0) {
    return Issue{ErrorCode::kInvalidValue, "kpm-window-ms", "must be a positive multiple of tti-ms"};
  }
  if (c.channel.coefficient < 0.0 || c.channel.coefficient >= 1.0 || !(c.channel.sigma >= 0.0)) {
    return Issue{ErrorCode::kInvalidValue, "channel", "coefficient must be in [0,1), sigma >= 0"};
  }

  std::set<UeId> known;
  for (std::size_t i = 0; i < c.ues.size(); ++i) {
    const auto& ue = c.ues[i];
    const std::string key = "ues[" + std::to_string(i) + "]";
    if (!known.insert(ue.id).second) {
      return Issue{ErrorCode::kDuplicateUe, key, "UE " + std::to_string(ue.id) + " listed twice"};
    }
    if (!std::isfinite(ue.efficiency) || ue.efficiency <= 0.0) {
      return Issue{ErrorCode::kInvalidValue, key + ".efficiency", "must be positive"};
    }
    if (!std::isfinite(ue.traffic_bps) || ue.traffic_bps < 0.0) {
      return Issue{ErrorCode::kInvalidValue, key + ".traffic-bps", "must be non-negative"};
    }
  }

  if (!c.network_slicing) {
    if (c.slice_scheduling_policy.size() > 1) {
      return Issue{ErrorCode::kInvalidValue, "slice-scheduling-policy", "slicing disabled: at most one code"};
    }
    if (!c.slice_scheduling_policy.empty() && !is_known_policy(c.slice_scheduling_policy[0])) {
      return Issue{ErrorCode::kUnknownPolicyCode, "slice-scheduling-policy[0]",
                   "code " + std::to_string(c.slice_scheduling_policy[0])};
    }
    return std::nullopt;
  }

  if (c.slice_allocation.empty()) {
    return Issue{ErrorCode::kInvalidValue, "slice-allocation", "slicing enabled without allocation"};
  }
  if (auto issue = validate_allocation(c.slice_allocation, c.rbg_count)) return issue;
  if (!c.slice_scheduling_policy.empty()) {
    if (auto issue = validate_policies(c.slice_scheduling_policy, c.slice_allocation.size())) return issue;
  }

  std::set<UeId> assigned;
  for (const auto& [slice, list] : c.slice_users) {
    const std::string key = "slice-users." + std::to_string(slice);
    if (!c.slice_allocation.contains(slice)) {
      return Issue{ErrorCode::kUnknownSlice, key, "slice has no RBG allocation"};
    }
    for (UeId ue : list) {
      if (!assigned.insert(ue).second) {
        return Issue{ErrorCode::kDuplicateUe, key, "UE " + std::to_string(ue) + " assigned twice"};
      }
      if (!known.contains(ue)) {
        return Issue{ErrorCode::kUnknownUe, key, "UE " + std::to_string(ue) + " missing from ues"};
      }
    }
  }
  return std::nullopt;
}

ScenarioConfig parse_radio_config(std::string_view json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text.begin(), json_text.end(), nullptr, false);
  if (j.is_discarded()) throw Error(ErrorCode::kMalformedJson, "", "not well-formed JSON");
  ScenarioConfig config = config_from_json(j);
  if (auto issue = validate_config(config)) throw issue->to_error();
  return config;
}

std::string radio_config_to_json(const ScenarioConfig& config) { return config_to_json(config).dump(); }

std::optional<Issue> merge_directive(const SliceTable& current, const ControlDirective& directive,
                                     int rbg_count, SliceTable& out) {
  if (directive.empty()) {
    return Issue{ErrorCode::kInvalidValue, "directive", "neither allocation nor policies present"};
  }
  SliceTable merged = current;
  if (directive.slice_allocation) {
    std::map<SliceId, RbgRange> ranges;
    for (const auto& s : merged.slices) ranges[s.id] = s.range;
    for (const auto& [id, range] : *directive.slice_allocation) {
      if (!ranges.contains(id)) {
        return Issue{ErrorCode::kUnknownSlice, "slice-allocation." + std::to_string(id), "no such slice"};
      }
      ranges[id] = range;
    }
    if (auto issue = validate_allocation(ranges, rbg_count)) return issue;
    for (auto& s : merged.slices) s.range = ranges[s.id];
  }
  if (directive.slice_scheduling_policy) {
    if (auto issue = validate_policies(*directive.slice_scheduling_policy, merged.slices.size())) return issue;
    for (std::size_t i = 0; i < merged.slices.size(); ++i) {
      merged.slices[i].policy = static_cast<SchedPolicy>((*directive.slice_scheduling_policy)[i]);
    }
  }
  out = std::move(merged);
  return std::nullopt;
}

}  // namespace orgym::ran
