// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "orgym/e2/node_id.hpp"
#include "orgym/ran/kpm.hpp"
#include "orgym/ran/types.hpp"

namespace orgym::e2 {

enum class MsgType : std::uint8_t {
  kE2SetupRequest = 0x01,
  kE2SetupResponse = 0x02,
  kRicSubscriptionRequest = 0x03,
  kRicSubscriptionResponse = 0x04,
  kRicIndication = 0x05,
  kRicControlRequest = 0x06,
  kRicControlAck = 0x07,
  kProtocolError = 0x08,
};

std::string_view to_string(MsgType type);

enum class Status {
  kAccepted,
  kRejected,
  kApplied,
  kTimeout,
};

std::string_view to_string(Status status);

struct E2SetupRequest {
  NodeId node_id;
  int kpm_window_ms = 0;
  int rbg_count = 0;
  friend bool operator==(const E2SetupRequest&, const E2SetupRequest&) = default;
};

struct E2SetupResponse {
  NodeId node_id;
  Status status = Status::kAccepted;
  std::string reason;
  friend bool operator==(const E2SetupResponse&, const E2SetupResponse&) = default;
};

struct RicSubscriptionRequest {
  std::uint32_t sub_id = 0;
  NodeId node_id;
  std::string xapp_id;
  int report_period_ms = 0;
  std::vector<std::string> metric_set;
  friend bool operator==(const RicSubscriptionRequest&, const RicSubscriptionRequest&) = default;
};

struct RicSubscriptionResponse {
  std::uint32_t sub_id = 0;
  NodeId node_id;
  Status status = Status::kAccepted;
  std::string reason;
  friend bool operator==(const RicSubscriptionResponse&, const RicSubscriptionResponse&) = default;
};

struct RicIndication {
  std::uint32_t sub_id = 0;
  NodeId node_id;
  std::uint64_t seq = 0;
  std::int64_t ts_ms = 0;
  std::vector<ran::KpmRecord> records;
  friend bool operator==(const RicIndication&, const RicIndication&) = default;
};

struct RicControlRequest {
  NodeId node_id;
  std::string xapp_id;
  ran::ControlDirective directive;
  friend bool operator==(const RicControlRequest&, const RicControlRequest&) = default;
};

struct RicControlAck {
  NodeId node_id;
  Status status = Status::kApplied;
  std::string reason;
  std::int64_t effective_tti = 0;
  friend bool operator==(const RicControlAck&, const RicControlAck&) = default;
};

struct ProtocolError {
  std::string cause;
  std::string detail;
  friend bool operator==(const ProtocolError&, const ProtocolError&) = default;
};

// Alternative order matches MsgType codes 0x01..0x08.
using MessageBody = std::variant<E2SetupRequest, E2SetupResponse, RicSubscriptionRequest,
                                 RicSubscriptionResponse, RicIndication, RicControlRequest, RicControlAck,
                                 ProtocolError>;

struct E2Message {
  std::uint32_t transaction_id = 0;
  MessageBody body;

  MsgType type() const { return static_cast<MsgType>(body.index() + 1); }

  template <typename T>
  const T* as() const {
    return std::get_if<T>(&body);
  }

  friend bool operator==(const E2Message&, const E2Message&) = default;
};

E2Message make_protocol_error(std::string cause, std::string detail = {}, std::uint32_t transaction_id = 0);

// KPM column names accepted in a subscription's metric set.
const std::vector<std::string>& kpm_metric_names();

}  // namespace orgym::e2
