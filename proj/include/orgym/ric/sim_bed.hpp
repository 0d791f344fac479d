// SPDX-License-Identifier: Apache-2.0
// Single-threaded deterministic deployment: one RIC and any number of base
// stations on a loopback bus, all stepped from simulated time.
#pragma once

#include <memory>
#include <vector>

#include "orgym/e2/base_station.hpp"
#include "orgym/e2/transport.hpp"
#include "orgym/ric/clock.hpp"
#include "orgym/ric/ric.hpp"

namespace orgym::ric {

class SimBed {
 public:
  explicit SimBed(RicOptions options = {});

  Ric& ric() { return ric_; }
  ManualClock& clock() { return clock_; }
  e2::LoopbackBus& bus() { return bus_; }

  // Adds a station and connects it (setup completes on the next pump()).
  // All stations must share one tti_ms.
  e2::BaseStation& add_station(ran::ScenarioConfig config);
  std::vector<std::unique_ptr<e2::BaseStation>>& stations() { return stations_; }

  void disconnect(e2::BaseStation& station);
  void reconnect(e2::BaseStation& station);

  // Delivers everything in flight, then expires overdue controls.
  void pump();
  // Steps every station one TTI, advancing the clock to its end.
  void step_tti();
  void run_ms(std::int64_t ms);

  std::int64_t now_ms() const { return clock_.now_ms(); }
  int tti_ms() const { return tti_ms_; }

 private:
  struct Attachment {
    e2::BaseStation* station;
    std::shared_ptr<ConnectionId> connection;
  };
  void attach(e2::BaseStation& station);

  ManualClock clock_;
  e2::LoopbackBus bus_;
  Ric ric_;
  std::vector<std::unique_ptr<e2::BaseStation>> stations_;
  std::vector<Attachment> attachments_;
  std::int64_t ttis_ = 0;
  int tti_ms_ = 0;
};

}  // namespace orgym::ric
