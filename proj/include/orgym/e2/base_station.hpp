// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "orgym/e2/node_fsm.hpp"
#include "orgym/e2/transport.hpp"
#include "orgym/ran/cell.hpp"

namespace orgym::e2 {

// A simulated cell exposed over one E2-lite connection.
class BaseStation {
 public:
  using KpmListener = std::function<void(const std::vector<ran::KpmRecord>&)>;

  explicit BaseStation(ran::ScenarioConfig config);

  NodeId node_id() const { return endpoint_.info().node_id; }
  ran::Cell& cell() { return cell_; }
  const ran::Cell& cell() const { return cell_; }
  const NodeEndpoint& endpoint() const { return endpoint_; }

  // Every closed KPM window, before it is queued for indications.
  void set_kpm_listener(KpmListener listener) { kpm_listener_ = std::move(listener); }

  void connect(std::shared_ptr<FrameSink> to_ric);
  void disconnect();
  void on_bytes(std::span<const std::uint8_t> bytes);

  // One TTI: cell step, KPM window if due, then due indications.
  void step();

  std::size_t protocol_errors_received() const { return protocol_errors_; }

 private:
  void send_all(const std::vector<E2Message>& msgs);

  ran::Cell cell_;
  NodeEndpoint endpoint_;
  std::shared_ptr<FrameSink> to_ric_;
  FrameReader reader_;
  KpmListener kpm_listener_;
  std::size_t protocol_errors_ = 0;
};

}  // namespace orgym::e2
