// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <chrono>
#include <condition_variable>
#include <thread>

#include "orgym/e2/base_station.hpp"
#include "orgym/ric/tcp_server.hpp"

using namespace orgym;
using namespace std::chrono_literals;

namespace {

ran::ScenarioConfig station_config() {
  ran::ScenarioConfig c;
  c.network_slicing = true;
  c.slice_allocation = {{0, {0, 7}}, {1, {8, 16}}};
  c.slice_scheduling_policy = {0, 0};
  c.slice_users = {{0, {1}}, {1, {2}}};
  c.ues = {ran::UeSpec{1, 1000.0, 0.0, true}, ran::UeSpec{2, 1000.0, 0.0, true}};
  return c;
}

// Collects decoded frames from a connection.
struct Inbox {
  std::mutex mu;
  std::condition_variable cv;
  e2::FrameReader reader;
  std::vector<e2::E2Message> msgs;

  void feed(std::span<const std::uint8_t> bytes) {
    std::lock_guard<std::mutex> lock(mu);
    reader.feed(bytes);
    for (auto r = reader.next(); r.ok(); r = reader.next()) msgs.push_back(*r.message);
    cv.notify_all();
  }
  template <typename Pred>
  bool wait(Pred pred) {
    std::unique_lock<std::mutex> lock(mu);
    return cv.wait_for(lock, 10s, [&] { return pred(msgs); });
  }
};

}  // namespace

TEST_CASE("node and remote xApp over tcp") {
  ric::SteadyClock clock;
  ric::Ric ric(clock);
  ric::RicTcpServer server(ric, 0);

  e2::BaseStation bs(station_config());
  std::mutex bs_mu;
  auto node_conn = e2::tcp_connect("127.0.0.1", server.port());
  node_conn->start(
      [&](std::span<const std::uint8_t> b) {
        std::lock_guard<std::mutex> lock(bs_mu);
        bs.on_bytes(b);
      },
      nullptr);
  {
    std::lock_guard<std::mutex> lock(bs_mu);
    bs.connect(node_conn);
  }
  for (int i = 0; i < 200 && ric.list_nodes().empty(); ++i) std::this_thread::sleep_for(10ms);
  REQUIRE(ric.list_nodes().size() == 1);

  Inbox inbox;
  auto xapp_conn = e2::tcp_connect("127.0.0.1", server.port());
  xapp_conn->start([&](std::span<const std::uint8_t> b) { inbox.feed(b); }, nullptr);
  xapp_conn->send(e2::E2Message{5, e2::RicSubscriptionRequest{0, bs.node_id(), "remote", 250, {}}});
  REQUIRE(inbox.wait([](const auto& m) { return !m.empty(); }));
  {
    std::lock_guard<std::mutex> lock(inbox.mu);
    REQUIRE(inbox.msgs[0].transaction_id == 5u);
    const auto* resp = inbox.msgs[0].as<e2::RicSubscriptionResponse>();
    REQUIRE(resp);
    CHECK(resp->status == e2::Status::kAccepted);
    CHECK(resp->sub_id != 0u);
  }
  CHECK(ric.xapps() == std::vector<std::string>{"remote"});

  for (int t = 0; t < 1000; ++t) {
    std::lock_guard<std::mutex> lock(bs_mu);
    bs.step();
  }
  auto count = [](const std::vector<e2::E2Message>& m, e2::MsgType type) {
    return std::count_if(m.begin(), m.end(), [&](const auto& x) { return x.type() == type; });
  };
  CHECK(inbox.wait([&](const auto& m) { return count(m, e2::MsgType::kRicIndication) == 4; }));

  ran::ControlDirective d;
  d.slice_allocation = std::map<ran::SliceId, ran::RbgRange>{{0, {0, 12}}, {1, {13, 16}}};
  xapp_conn->send(e2::E2Message{9, e2::RicControlRequest{bs.node_id(), "remote", d}});
  REQUIRE(inbox.wait([&](const auto& m) { return count(m, e2::MsgType::kRicControlAck) == 1; }));
  {
    std::lock_guard<std::mutex> lock(inbox.mu);
    const auto& ack = inbox.msgs.back();
    CHECK(ack.transaction_id == 9u);
    CHECK(ack.as<e2::RicControlAck>()->status == e2::Status::kApplied);
  }

  // unknown node from a remote xApp comes back as a rejected ack
  xapp_conn->send(e2::E2Message{10, e2::RicControlRequest{e2::NodeId("gnb:999-999-00000000"), "remote", d}});
  REQUIRE(inbox.wait([&](const auto& m) { return count(m, e2::MsgType::kRicControlAck) == 2; }));
  {
    std::lock_guard<std::mutex> lock(inbox.mu);
    CHECK(inbox.msgs.back().as<e2::RicControlAck>()->reason == "UnknownNode");
  }

  node_conn->close();
  for (int i = 0; i < 200 && !ric.list_nodes().empty(); ++i) std::this_thread::sleep_for(10ms);
  CHECK(ric.list_nodes().empty());
  xapp_conn->close();
  server.stop();
}
