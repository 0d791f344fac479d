// SPDX-License-Identifier: Apache-2.0
#include "orgym/xapp/model.hpp"

#include <algorithm>
#include <cmath>

#include "orgym/common/error.hpp"

namespace orgym::xapp {

SpaceModel::SpaceModel(ActionSpace space, std::unique_ptr<ActionPolicy> policy, std::string target)
    : space_(std::move(space)), policy_(std::move(policy)), target_(std::move(target)) {}

std::optional<Decision> SpaceModel::decide(const FeatureVector& features) {
  const auto action = policy_->select(features);
  if (!action) return std::nullopt;
  return Decision{*action, space_.decode(*action, target_)};
}

ran::ControlDirective prioritize_directive(const std::vector<ran::SliceId>& slice_ids, int rbg_count,
                                           ran::SliceId target_slice, double boost_share,
                                           const std::string& target_node) {
  std::vector<ran::SliceId> ids = slice_ids;
  std::sort(ids.begin(), ids.end());
  if (std::find(ids.begin(), ids.end(), target_slice) == ids.end()) {
    throw Error(ErrorCode::kUnknownSlice, "target_slice", std::to_string(target_slice));
  }
  const int n = static_cast<int>(ids.size());
  if (!std::isfinite(boost_share) || boost_share < 1.0 / n - 1e-12 || boost_share > 0.9 + 1e-12) {
    throw Error(ErrorCode::kInvalidShare, "boost_share",
                std::to_string(boost_share) + " outside [1/" + std::to_string(n) + ", 0.9]");
  }
  const int boosted = static_cast<int>(std::ceil(boost_share * rbg_count - 1e-9));
  const int rest = rbg_count - boosted;
  const int others = n - 1;
  if (boosted < 1 || (others > 0 && rest < others)) {
    throw Error(ErrorCode::kInvalidShare, "boost_share", "a slice would be left without RBGs");
  }

  std::map<ran::SliceId, int> counts;
  counts[target_slice] = others == 0 ? rbg_count : boosted;
  int k = 0;
  for (ran::SliceId id : ids) {
    if (id == target_slice) continue;
    counts[id] = rest / others + (k < rest % others ? 1 : 0);
    ++k;
  }
  ran::ControlDirective d;
  d.target = target_node;
  std::map<ran::SliceId, ran::RbgRange> alloc;
  int start = 0;
  for (ran::SliceId id : ids) {
    alloc[id] = ran::RbgRange{start, start + counts[id] - 1};
    start += counts[id];
  }
  d.slice_allocation = alloc;
  return d;
}

std::optional<Decision> PrioritizeModel::decide(const FeatureVector&) {
  if (done_ || in_flight_) return std::nullopt;
  in_flight_ = true;
  return Decision{-1, directive_};
}

void PrioritizeModel::on_ack(const Decision&, const e2::RicControlAck& ack) {
  in_flight_ = false;
  if (ack.status == e2::Status::kApplied) done_ = true;
}

}  // namespace orgym::xapp
