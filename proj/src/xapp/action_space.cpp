// SPDX-License-Identifier: Apache-2.0
#include "orgym/xapp/action_space.hpp"

#include <algorithm>
#include <functional>

#include "orgym/common/error.hpp"

namespace orgym::xapp {

std::vector<Partition> partition_catalog(const std::vector<ran::SliceId>& slice_ids, int rbg_count) {
  std::vector<Partition> out;
  const int n = static_cast<int>(slice_ids.size());
  if (n == 0) return out;
  if (n == 1) {
    out.push_back({{slice_ids[0], {0, rbg_count - 1}}});
    return out;
  }
  std::vector<int> cuts;
  for (int c = 2; c <= rbg_count - 2; c += 2) cuts.push_back(c);
  if (rbg_count - 2 >= 2 && (cuts.empty() || cuts.back() != rbg_count - 2)) cuts.push_back(rbg_count - 2);

  std::vector<int> chosen;
  std::function<void(std::size_t, int)> rec = [&](std::size_t from, int prev) {
    if (static_cast<int>(chosen.size()) == n - 1) {
      if (rbg_count - prev < 2) return;
      Partition p;
      int start = 0;
      for (int i = 0; i < n; ++i) {
        const int end = i < n - 1 ? chosen[i] : rbg_count;
        p[slice_ids[i]] = ran::RbgRange{start, end - 1};
        start = end;
      }
      out.push_back(std::move(p));
      return;
    }
    for (std::size_t k = from; k < cuts.size(); ++k) {
      if (cuts[k] - prev < 2) continue;
      chosen.push_back(cuts[k]);
      rec(k + 1, cuts[k]);
      chosen.pop_back();
    }
  };
  rec(0, 0);
  return out;
}

ActionSpace ActionSpace::sched_only(std::vector<ran::SliceId> slice_ids) {
  ActionSpace s;
  s.slice_ids_ = std::move(slice_ids);
  for (std::size_t i = 0; i < s.slice_ids_.size(); ++i) s.policy_combos_ *= 3;
  return s;
}

ActionSpace ActionSpace::joint(std::vector<ran::SliceId> slice_ids, int rbg_count, const Partition& base) {
  ActionSpace s = sched_only(std::move(slice_ids));
  if (s.slice_ids_.size() == 1) {
    s.partitions_ = {base};
  } else {
    s.partitions_ = partition_catalog(s.slice_ids_, rbg_count);
  }
  return s;
}

std::vector<int> ActionSpace::policies(int action_id) const {
  int code = action_id % policy_combos_;
  std::vector<int> out(slice_ids_.size());
  for (int i = static_cast<int>(out.size()) - 1; i >= 0; --i) {
    out[i] = code % 3;
    code /= 3;
  }
  return out;
}

ran::ControlDirective ActionSpace::decode(int action_id, const std::string& target) const {
  if (action_id < 0 || action_id >= size()) {
    throw Error(ErrorCode::kInvalidValue, "action_id", std::to_string(action_id) + " outside action space");
  }
  ran::ControlDirective d;
  d.target = target;
  d.slice_scheduling_policy = policies(action_id);
  if (joint()) d.slice_allocation = partitions_[static_cast<std::size_t>(action_id / policy_combos_)];
  return d;
}

std::string ActionSpace::describe(int action_id) const {
  std::string out;
  const auto p = policies(action_id);
  for (std::size_t i = 0; i < p.size(); ++i) {
    out += (i ? "," : "") + std::to_string(slice_ids_[i]) + ":p" + std::to_string(p[i]);
  }
  if (joint()) {
    for (const auto& [id, r] : partitions_[static_cast<std::size_t>(action_id / policy_combos_)]) {
      out += " " + std::to_string(id) + "=[" + std::to_string(r.first) + "," + std::to_string(r.last) + "]";
    }
  }
  return out;
}

}  // namespace orgym::xapp
