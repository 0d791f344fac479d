// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <variant>
#include <vector>

#include "orgym/e2/messages.hpp"
#include "orgym/ran/cell.hpp"

namespace orgym::e2 {

enum class NodeState { kIdle, kSetupSent, kEstablished };

std::string_view to_string(NodeState state);

namespace node_event {
struct Connected {};
struct Disconnected {};
struct Received {
  E2Message msg;
};
// Simulation clock reached now_ms; due indications go out.
struct Tick {
  std::int64_t now_ms = 0;
};
// A KPM window closed locally.
struct KpmWindow {
  std::vector<ran::KpmRecord> records;
};
}  // namespace node_event

using NodeEvent = std::variant<node_event::Connected, node_event::Disconnected, node_event::Received,
                               node_event::Tick, node_event::KpmWindow>;

struct NodeInfo {
  NodeId node_id;
  int kpm_window_ms = ran::kDefaultKpmWindowMs;
  int rbg_count = ran::kDefaultRbgCount;
};

// Applies a validated control to the local cell.
using ControlHandler = std::function<ran::ControlOutcome(const ran::ControlDirective&)>;

// Base-station side of an E2-lite association. Idle -> SetupSent on connect,
// SetupSent -> Established on an accepted E2SetupResponse. Established nodes
// serve subscriptions with periodic indications and apply controls through
// the handler. Out-of-state messages draw a ProtocolError and leave the
// state unchanged; a received ProtocolError is never answered.
class NodeEndpoint {
 public:
  NodeEndpoint(NodeInfo info, ControlHandler on_control);

  // Returns the messages to send to the RIC, in order.
  std::vector<E2Message> handle(const NodeEvent& event);

  NodeState state() const { return state_; }
  const NodeInfo& info() const { return info_; }
  std::size_t subscription_count() const { return subs_.size(); }
  std::int64_t now_ms() const { return now_ms_; }

 private:
  struct Subscription {
    int period_ms = 0;
    std::int64_t next_due_ms = 0;
    std::uint64_t seq = 0;
    std::vector<ran::KpmRecord> pending;
  };

  std::vector<E2Message> on_message(const E2Message& msg);
  std::vector<E2Message> on_subscription(const E2Message& msg, const RicSubscriptionRequest& req);
  std::vector<E2Message> on_control(const E2Message& msg, const RicControlRequest& req);
  std::vector<E2Message> on_tick(std::int64_t now_ms);

  NodeInfo info_;
  ControlHandler on_control_;
  NodeState state_ = NodeState::kIdle;
  std::uint32_t next_transaction_ = 1;
  std::int64_t now_ms_ = 0;
  std::map<std::uint32_t, Subscription> subs_;
};

}  // namespace orgym::e2
