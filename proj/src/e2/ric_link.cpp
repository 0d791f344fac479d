// SPDX-License-Identifier: Apache-2.0
#include "orgym/e2/ric_link.hpp"

namespace orgym::e2 {

std::string_view to_string(LinkState state) {
  switch (state) {
    case LinkState::kAwaitingSetup: return "AwaitingSetup";
    case LinkState::kRegistered: return "Registered";
    case LinkState::kClosed: return "Closed";
  }
  return "Unknown";
}

LinkOutput RicLink::on_message(const E2Message& msg, NodeDirectory& directory) {
  LinkOutput out;
  if (state_ == LinkState::kClosed) return out;
  if (msg.as<ProtocolError>() != nullptr) {
    out.upcalls.push_back(msg);
    return out;
  }

  if (state_ == LinkState::kAwaitingSetup) {
    const auto* setup = msg.as<E2SetupRequest>();
    if (setup == nullptr) {
      out.to_node.push_back(
          make_protocol_error("SetupRequired", std::string(to_string(msg.type())), msg.transaction_id));
      return out;
    }
    if (!directory.register_node(*setup)) {
      out.to_node.push_back(
          E2Message{msg.transaction_id, E2SetupResponse{setup->node_id, Status::kRejected, "DuplicateNode"}});
      return out;
    }
    state_ = LinkState::kRegistered;
    node_id_ = setup->node_id;
    out.to_node.push_back(E2Message{msg.transaction_id, E2SetupResponse{setup->node_id, Status::kAccepted, {}}});
    return out;
  }

  switch (msg.type()) {
    case MsgType::kRicSubscriptionResponse:
    case MsgType::kRicIndication:
    case MsgType::kRicControlAck:
      out.upcalls.push_back(msg);
      break;
    case MsgType::kE2SetupRequest:
      out.to_node.push_back(make_protocol_error("DuplicateSetup", node_id_->str(), msg.transaction_id));
      break;
    default:
      out.to_node.push_back(
          make_protocol_error("UnexpectedMessage", std::string(to_string(msg.type())), msg.transaction_id));
      break;
  }
  return out;
}

std::optional<E2Message> RicLink::subscription(RicSubscriptionRequest request, std::uint32_t transaction_id) const {
  if (state_ != LinkState::kRegistered) return std::nullopt;
  return E2Message{transaction_id, std::move(request)};
}

std::optional<E2Message> RicLink::control(RicControlRequest request, std::uint32_t transaction_id) const {
  if (state_ != LinkState::kRegistered) return std::nullopt;
  return E2Message{transaction_id, std::move(request)};
}

}  // namespace orgym::e2
