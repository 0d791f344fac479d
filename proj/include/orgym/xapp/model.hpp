// SPDX-License-Identifier: Apache-2.0
// The decision stage of an xApp and the concrete models used by the
// catalog xApps.
#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "orgym/e2/messages.hpp"
#include "orgym/xapp/action_space.hpp"
#include "orgym/xapp/features.hpp"

namespace orgym::xapp {

struct Decision {
  int action_id = -1;  // -1 for directives outside an enumerated space
  ran::ControlDirective directive;
};

class DecisionModel {
 public:
  virtual ~DecisionModel() = default;
  // nullopt is a no-op: nothing is sent this epoch.
  virtual std::optional<Decision> decide(const FeatureVector& features) = 0;
  virtual void on_ack(const Decision& decision, const e2::RicControlAck& ack) {
    (void)decision;
    (void)ack;
  }
};

// Chooses an action id in an enumerated space.
class ActionPolicy {
 public:
  virtual ~ActionPolicy() = default;
  virtual std::optional<int> select(const FeatureVector& features) = 0;
};

class ConstantPolicy : public ActionPolicy {
 public:
  explicit ConstantPolicy(std::optional<int> action) : action_(action) {}
  std::optional<int> select(const FeatureVector&) override { return action_; }

 private:
  std::optional<int> action_;
};

// Decodes a policy's choices through an action space.
class SpaceModel : public DecisionModel {
 public:
  SpaceModel(ActionSpace space, std::unique_ptr<ActionPolicy> policy, std::string target);
  std::optional<Decision> decide(const FeatureVector& features) override;
  const ActionSpace& space() const { return space_; }

 private:
  ActionSpace space_;
  std::unique_ptr<ActionPolicy> policy_;
  std::string target_;
};

// Target slice gets ceil(boost_share * rbg_count) RBGs, the rest split evenly
// over the other slices (remainder to the lowest ids), laid out contiguously
// in slice id order. Throws InvalidShare unless boost_share is in
// [1/n, 0.9] and every slice keeps at least one RBG; UnknownSlice for a
// target outside slice_ids.
ran::ControlDirective prioritize_directive(const std::vector<ran::SliceId>& slice_ids, int rbg_count,
                                           ran::SliceId target_slice, double boost_share,
                                           const std::string& target_node);

// Sends the prioritizing directive once, then stays quiet.
class PrioritizeModel : public DecisionModel {
 public:
  explicit PrioritizeModel(ran::ControlDirective directive) : directive_(std::move(directive)) {}
  std::optional<Decision> decide(const FeatureVector&) override;
  void on_ack(const Decision&, const e2::RicControlAck& ack) override;

 private:
  ran::ControlDirective directive_;
  bool in_flight_ = false;
  bool done_ = false;
};

}  // namespace orgym::xapp
