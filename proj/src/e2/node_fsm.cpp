// SPDX-License-Identifier: Apache-2.0
#include "orgym/e2/node_fsm.hpp"

#include <algorithm>

namespace orgym::e2 {

std::string_view to_string(NodeState state) {
  switch (state) {
    case NodeState::kIdle: return "Idle";
    case NodeState::kSetupSent: return "SetupSent";
    case NodeState::kEstablished: return "Established";
  }
  return "Unknown";
}

NodeEndpoint::NodeEndpoint(NodeInfo info, ControlHandler on_control)
    : info_(std::move(info)), on_control_(std::move(on_control)) {}

std::vector<E2Message> NodeEndpoint::handle(const NodeEvent& event) {
  return std::visit(
      [this](const auto& ev) -> std::vector<E2Message> {
        using T = std::decay_t<decltype(ev)>;
        if constexpr (std::is_same_v<T, node_event::Connected>) {
          if (state_ != NodeState::kIdle) return {};
          state_ = NodeState::kSetupSent;
          return {E2Message{next_transaction_++, E2SetupRequest{info_.node_id, info_.kpm_window_ms, info_.rbg_count}}};
        } else if constexpr (std::is_same_v<T, node_event::Disconnected>) {
          state_ = NodeState::kIdle;
          subs_.clear();
          return {};
        } else if constexpr (std::is_same_v<T, node_event::Received>) {
          return on_message(ev.msg);
        } else if constexpr (std::is_same_v<T, node_event::Tick>) {
          return on_tick(ev.now_ms);
        } else {
          for (auto& [id, sub] : subs_) sub.pending.insert(sub.pending.end(), ev.records.begin(), ev.records.end());
          return {};
        }
      },
      event);
}

std::vector<E2Message> NodeEndpoint::on_message(const E2Message& msg) {
  if (msg.as<ProtocolError>() != nullptr) return {};

  switch (state_) {
    case NodeState::kIdle:
      return {make_protocol_error("NotConnected", std::string(to_string(msg.type())), msg.transaction_id)};
    case NodeState::kSetupSent:
      if (const auto* resp = msg.as<E2SetupResponse>()) {
        if (resp->node_id != info_.node_id) {
          return {make_protocol_error("UnknownNode", resp->node_id.str(), msg.transaction_id)};
        }
        state_ = resp->status == Status::kAccepted ? NodeState::kEstablished : NodeState::kIdle;
        return {};
      }
      return {make_protocol_error("SetupPending", std::string(to_string(msg.type())), msg.transaction_id)};
    case NodeState::kEstablished:
      if (const auto* req = msg.as<RicSubscriptionRequest>()) return on_subscription(msg, *req);
      if (const auto* req = msg.as<RicControlRequest>()) return on_control(msg, *req);
      return {make_protocol_error("UnexpectedMessage", std::string(to_string(msg.type())), msg.transaction_id)};
  }
  return {};
}

std::vector<E2Message> NodeEndpoint::on_subscription(const E2Message& msg, const RicSubscriptionRequest& req) {
  RicSubscriptionResponse resp{req.sub_id, info_.node_id, Status::kAccepted, {}};
  const auto& known = kpm_metric_names();
  if (req.node_id != info_.node_id) {
    resp.status = Status::kRejected;
    resp.reason = "UnknownNode";
  } else if (req.report_period_ms < info_.kpm_window_ms) {
    resp.status = Status::kRejected;
    resp.reason = "PeriodTooSmall";
  } else if (subs_.contains(req.sub_id)) {
    resp.status = Status::kRejected;
    resp.reason = "DuplicateSubscription";
  } else {
    for (const auto& name : req.metric_set) {
      if (std::find(known.begin(), known.end(), name) == known.end()) {
        resp.status = Status::kRejected;
        resp.reason = "UnknownMetric";
        break;
      }
    }
  }
  if (resp.status == Status::kAccepted) {
    subs_[req.sub_id] = Subscription{req.report_period_ms, now_ms_ + req.report_period_ms, 0, {}};
  }
  return {E2Message{msg.transaction_id, resp}};
}

std::vector<E2Message> NodeEndpoint::on_control(const E2Message& msg, const RicControlRequest& req) {
  RicControlAck ack{info_.node_id, Status::kApplied, {}, 0};
  if (req.node_id != info_.node_id) {
    ack.status = Status::kRejected;
    ack.reason = "UnknownNode";
  } else {
    const ran::ControlOutcome outcome = on_control_(req.directive);
    ack.effective_tti = outcome.effective_tti;
    if (!outcome.applied) {
      ack.status = Status::kRejected;
      ack.reason = outcome.issue ? std::string(orgym::to_string(outcome.issue->code)) : "Rejected";
    }
  }
  return {E2Message{msg.transaction_id, ack}};
}

std::vector<E2Message> NodeEndpoint::on_tick(std::int64_t now_ms) {
  now_ms_ = std::max(now_ms_, now_ms);
  std::vector<E2Message> out;
  if (state_ != NodeState::kEstablished) return out;
  for (auto& [id, sub] : subs_) {
    if (now_ms_ < sub.next_due_ms) continue;
    RicIndication ind{id, info_.node_id, sub.seq++, now_ms_, std::move(sub.pending)};
    sub.pending.clear();
    while (sub.next_due_ms <= now_ms_) sub.next_due_ms += sub.period_ms;
    out.push_back(E2Message{next_transaction_++, std::move(ind)});
  }
  return out;
}

}  // namespace orgym::e2
