// SPDX-License-Identifier: Apache-2.0
#include "orgym/e2/messages.hpp"

namespace orgym::e2 {

std::string_view to_string(MsgType type) {
  switch (type) {
    case MsgType::kE2SetupRequest: return "E2SetupRequest";
    case MsgType::kE2SetupResponse: return "E2SetupResponse";
    case MsgType::kRicSubscriptionRequest: return "RicSubscriptionRequest";
    case MsgType::kRicSubscriptionResponse: return "RicSubscriptionResponse";
    case MsgType::kRicIndication: return "RicIndication";
    case MsgType::kRicControlRequest: return "RicControlRequest";
    case MsgType::kRicControlAck: return "RicControlAck";
    case MsgType::kProtocolError: return "ProtocolError";
  }
  return "Unknown";
}

std::string_view to_string(Status status) {
  switch (status) {
    case Status::kAccepted: return "accepted";
    case Status::kRejected: return "rejected";
    case Status::kApplied: return "applied";
    case Status::kTimeout: return "timeout";
  }
  return "unknown";
}

E2Message make_protocol_error(std::string cause, std::string detail, std::uint32_t transaction_id) {
  return E2Message{transaction_id, ProtocolError{std::move(cause), std::move(detail)}};
}

const std::vector<std::string>& kpm_metric_names() {
  static const std::vector<std::string> names{"dl_tx_bytes", "dl_tx_tbs",  "dl_buffer_bytes",
                                              "dl_thr_mbps", "rbg_share", "sched_policy"};
  return names;
}

}  // namespace orgym::e2
