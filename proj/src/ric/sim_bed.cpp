// SPDX-License-Identifier: Apache-2.0
#include "orgym/ric/sim_bed.hpp"

#include "orgym/common/error.hpp"

namespace orgym::ric {

SimBed::SimBed(RicOptions options) : ric_(clock_, std::move(options)) {}

e2::BaseStation& SimBed::add_station(ran::ScenarioConfig config) {
  if (tti_ms_ == 0) tti_ms_ = config.tti_ms;
  if (config.tti_ms != tti_ms_) throw Error(ErrorCode::kInvalidValue, "tti-ms", "stations must share one TTI length");
  stations_.push_back(std::make_unique<e2::BaseStation>(std::move(config)));
  attach(*stations_.back());
  return *stations_.back();
}

void SimBed::attach(e2::BaseStation& station) {
  auto id = std::make_shared<ConnectionId>(0);
  auto pipe = bus_.connect([&station](std::span<const std::uint8_t> b) { station.on_bytes(b); },
                           [this, id](std::span<const std::uint8_t> b) { ric_.on_bytes(*id, b); });
  *id = ric_.accept(pipe.b_to_a);
  for (auto& a : attachments_) {
    if (a.station == &station) {
      a.connection = id;
      station.connect(pipe.a_to_b);
      return;
    }
  }
  attachments_.push_back({&station, id});
  station.connect(pipe.a_to_b);
}

void SimBed::disconnect(e2::BaseStation& station) {
  station.disconnect();
  for (auto& a : attachments_) {
    if (a.station == &station) ric_.on_closed(*a.connection);
  }
}

void SimBed::reconnect(e2::BaseStation& station) { attach(station); }

void SimBed::pump() {
  bus_.pump();
  ric_.poll();
}

void SimBed::step_tti() {
  ++ttis_;
  clock_.set(ttis_ * tti_ms_);
  for (auto& s : stations_) s->step();
  pump();
}

void SimBed::run_ms(std::int64_t ms) {
  const std::int64_t ttis = ms / (tti_ms_ == 0 ? 1 : tti_ms_);
  for (std::int64_t i = 0; i < ttis; ++i) step_tti();
}

}  // namespace orgym::ric
