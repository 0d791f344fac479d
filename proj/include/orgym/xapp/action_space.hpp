// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "orgym/ran/types.hpp"

namespace orgym::xapp {

using Partition = std::map<ran::SliceId, ran::RbgRange>;

// Contiguous splits of [0, rbg_count) among `slice_ids` (in order) where
// every cut sits on an even RBG index or at rbg_count - 2 and every slice
// keeps at least 2 RBGs. 17 RBGs over 2 slices gives cuts 2,4,...,14,15.
std::vector<Partition> partition_catalog(const std::vector<ran::SliceId>& slice_ids, int rbg_count);

// Enumerated actions, each decoding to a ControlDirective.
//   sched-only: id = sum_i p_i * 3^(n-1-i), policies only
//   joint:      id = partition * 3^n + policy id, allocation and policies
class ActionSpace {
 public:
  static ActionSpace sched_only(std::vector<ran::SliceId> slice_ids);
  // A single-slice space keeps `base` as its only partition.
  static ActionSpace joint(std::vector<ran::SliceId> slice_ids, int rbg_count, const Partition& base);

  int size() const { return policy_combos_ * static_cast<int>(std::max<std::size_t>(partitions_.size(), 1)); }
  bool joint() const { return !partitions_.empty(); }
  const std::vector<ran::SliceId>& slice_ids() const { return slice_ids_; }
  const std::vector<Partition>& partitions() const { return partitions_; }

  std::vector<int> policies(int action_id) const;
  // Throws Error(kInvalidValue) for an id outside [0, size()).
  ran::ControlDirective decode(int action_id, const std::string& target) const;
  std::string describe(int action_id) const;

 private:
  std::vector<ran::SliceId> slice_ids_;
  int policy_combos_ = 1;
  std::vector<Partition> partitions_;
};

}  // namespace orgym::xapp
