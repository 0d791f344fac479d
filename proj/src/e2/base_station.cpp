// SPDX-License-Identifier: Apache-2.0
#include "orgym/e2/base_station.hpp"

#include "orgym/common/log.hpp"

namespace orgym::e2 {

BaseStation::BaseStation(ran::ScenarioConfig config)
    : cell_(std::move(config)),
      endpoint_(NodeInfo{NodeId(cell_.config().bs_id), cell_.config().kpm_window_ms, cell_.config().rbg_count},
                [this](const ran::ControlDirective& d) { return cell_.apply_control(d); }) {}

void BaseStation::send_all(const std::vector<E2Message>& msgs) {
  if (!to_ric_) return;
  for (const auto& m : msgs) to_ric_->send(m);
}

void BaseStation::connect(std::shared_ptr<FrameSink> to_ric) {
  to_ric_ = std::move(to_ric);
  reader_ = FrameReader{};
  send_all(endpoint_.handle(node_event::Connected{}));
}

void BaseStation::disconnect() {
  endpoint_.handle(node_event::Disconnected{});
  if (to_ric_) to_ric_->close();
  to_ric_.reset();
}

void BaseStation::on_bytes(std::span<const std::uint8_t> bytes) {
  reader_.feed(bytes);
  for (auto r = reader_.next(); r.status != DecodeStatus::kNeedMoreBytes; r = reader_.next()) {
    if (!r.ok()) {
      log::warn("bs: undecodable frame: " + r.detail);
      if (reader_.poisoned()) {
        disconnect();
        return;
      }
      continue;
    }
    if (const auto* err = r.message->as<ProtocolError>()) {
      ++protocol_errors_;
      log::warn("bs: protocol error from RIC: " + err->cause + " " + err->detail);
    }
    send_all(endpoint_.handle(node_event::Received{*r.message}));
  }
}

void BaseStation::step() {
  cell_.step();
  if (cell_.window_due()) {
    auto records = cell_.emit_kpm_window();
    if (kpm_listener_) kpm_listener_(records);
    endpoint_.handle(node_event::KpmWindow{std::move(records)});
  }
  send_all(endpoint_.handle(node_event::Tick{cell_.now_ms()}));
}

}  // namespace orgym::e2
