// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <vector>

#include "orgym/e2/messages.hpp"

namespace orgym::e2 {

enum class LinkState { kAwaitingSetup, kRegistered, kClosed };

std::string_view to_string(LinkState state);

// Registry view a link consults when a node announces itself.
class NodeDirectory {
 public:
  virtual ~NodeDirectory() = default;
  // False when the node id is already registered on another link.
  virtual bool register_node(const E2SetupRequest& setup) = 0;
};

struct LinkOutput {
  std::vector<E2Message> to_node;
  // Node messages for the RIC core: subscription responses, indications,
  // control acks and protocol errors raised by the node.
  std::vector<E2Message> upcalls;
};

// RIC side of one node connection (the e2term role).
class RicLink {
 public:
  LinkOutput on_message(const E2Message& msg, NodeDirectory& directory);

  // Outbound requests; nullopt unless the link is registered.
  std::optional<E2Message> subscription(RicSubscriptionRequest request, std::uint32_t transaction_id) const;
  std::optional<E2Message> control(RicControlRequest request, std::uint32_t transaction_id) const;

  void close() { state_ = LinkState::kClosed; }

  LinkState state() const { return state_; }
  const std::optional<NodeId>& node_id() const { return node_id_; }

 private:
  LinkState state_ = LinkState::kAwaitingSetup;
  std::optional<NodeId> node_id_;
};

}  // namespace orgym::e2
