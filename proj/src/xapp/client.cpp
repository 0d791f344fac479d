// SPDX-License-Identifier: Apache-2.0
#include "orgym/xapp/client.hpp"

#include "orgym/common/error.hpp"
#include "orgym/common/log.hpp"

namespace orgym::xapp {

void InProcessRicClient::attach(const std::string& xapp_id, ric::XappSink* sink) {
  ric_.register_xapp(xapp_id, sink);
  xapp_id_ = xapp_id;
  sink_ = sink;
}

void InProcessRicClient::detach() {
  if (sink_ == nullptr) return;
  ric_.unregister_xapp(xapp_id_);
  sink_ = nullptr;
}

void InProcessRicClient::subscribe(const e2::NodeId& node, int report_period_ms,
                                   const std::vector<std::string>& metrics, std::uint32_t tag) {
  try {
    ric_.subscribe(xapp_id_, node, report_period_ms, metrics, tag);
  } catch (const Error& e) {
    sink_->on_subscription_response(
        tag, e2::RicSubscriptionResponse{0, node, e2::Status::kRejected, std::string(to_string(e.code()))});
  }
}

void InProcessRicClient::control(const ran::ControlDirective& directive, std::uint32_t tag) {
  try {
    ric_.forward_control(xapp_id_, directive, tag);
  } catch (const Error& e) {
    const auto node = e2::NodeId::parse(directive.target).value_or(e2::NodeId{});
    sink_->on_control_ack(tag, e2::RicControlAck{node, e2::Status::kRejected, std::string(to_string(e.code())), 0});
  }
}

void TcpRicClient::attach(const std::string& xapp_id, ric::XappSink* sink) {
  xapp_id_ = xapp_id;
  sink_ = sink;
  conn_ = e2::tcp_connect(host_, port_);
  conn_->start([this](std::span<const std::uint8_t> b) { on_bytes(b); }, nullptr);
}

void TcpRicClient::detach() {
  if (!conn_) return;
  conn_->close();
  conn_.reset();
}

void TcpRicClient::on_bytes(std::span<const std::uint8_t> bytes) {
  reader_.feed(bytes);
  for (auto r = reader_.next(); r.status != e2::DecodeStatus::kNeedMoreBytes; r = reader_.next()) {
    if (!r.ok()) {
      log::warn("xapp: undecodable frame from RIC: " + r.detail);
      if (reader_.poisoned()) return;
      continue;
    }
    const auto& msg = *r.message;
    if (const auto* ind = msg.as<e2::RicIndication>()) {
      sink_->on_indication(*ind);
    } else if (const auto* resp = msg.as<e2::RicSubscriptionResponse>()) {
      sink_->on_subscription_response(msg.transaction_id, *resp);
    } else if (const auto* ack = msg.as<e2::RicControlAck>()) {
      sink_->on_control_ack(msg.transaction_id, *ack);
    } else if (const auto* err = msg.as<e2::ProtocolError>()) {
      log::warn("xapp: protocol error from RIC: " + err->cause + " " + err->detail);
    }
  }
}

void TcpRicClient::subscribe(const e2::NodeId& node, int report_period_ms, const std::vector<std::string>& metrics,
                             std::uint32_t tag) {
  conn_->send(e2::E2Message{tag, e2::RicSubscriptionRequest{0, node, xapp_id_, report_period_ms, metrics}});
}

void TcpRicClient::control(const ran::ControlDirective& directive, std::uint32_t tag) {
  const auto node = e2::NodeId::parse(directive.target).value_or(e2::NodeId{});
  conn_->send(e2::E2Message{tag, e2::RicControlRequest{node, xapp_id_, directive}});
}

}  // namespace orgym::xapp
