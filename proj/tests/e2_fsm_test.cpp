// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "orgym/e2/node_fsm.hpp"
#include "orgym/e2/ric_link.hpp"
#include "orgym/e2/transport.hpp"
#include "orgym/ran/cell.hpp"
#include "support/fsm_model.hpp"

using namespace orgym;
using namespace orgym::e2;

namespace {

const NodeId kNode("gnb:311-048-01000501");

ran::ScenarioConfig small_cell() {
  ran::ScenarioConfig c;
  c.network_slicing = true;
  c.slice_allocation = {{0, {0, 7}}, {1, {8, 16}}};
  c.slice_scheduling_policy = {0, 0};
  c.slice_users = {{0, {1}}, {1, {2}}};
  c.ues = {ran::UeSpec{1, 1000.0, 0.0, true}, ran::UeSpec{2, 1000.0, 0.0, true}};
  return c;
}

struct AcceptAll : NodeDirectory {
  bool register_node(const E2SetupRequest&) override { return true; }
};

NodeEndpoint established(ran::Cell& cell) {
  NodeEndpoint node(NodeInfo{kNode, 100, 17}, [&cell](const ran::ControlDirective& d) { return cell.apply_control(d); });
  auto out = node.handle(node_event::Connected{});
  REQUIRE(out.size() == 1);
  node.handle(node_event::Received{E2Message{out[0].transaction_id, E2SetupResponse{kNode, Status::kAccepted, {}}}});
  REQUIRE(node.state() == NodeState::kEstablished);
  return node;
}

}  // namespace

TEST_CASE("node connects, sets up and reaches Established") {
  ran::Cell cell(small_cell());
  NodeEndpoint node(NodeInfo{kNode, 100, 17}, [&](const ran::ControlDirective& d) { return cell.apply_control(d); });
  CHECK(node.state() == NodeState::kIdle);
  auto out = node.handle(node_event::Connected{});
  REQUIRE(out.size() == 1);
  const auto* setup = out[0].as<E2SetupRequest>();
  REQUIRE(setup);
  CHECK(setup->node_id == kNode);
  CHECK(setup->kpm_window_ms == 100);
  CHECK(setup->rbg_count == 17);
  CHECK(node.state() == NodeState::kSetupSent);

  // anything but the setup response is out of state
  auto early = node.handle(node_event::Received{E2Message{3, RicControlRequest{kNode, "x", {}}}});
  REQUIRE(early.size() == 1);
  CHECK(early[0].as<ProtocolError>()->cause == "SetupPending");
  CHECK(early[0].transaction_id == 3u);

  node.handle(node_event::Received{E2Message{1, E2SetupResponse{kNode, Status::kAccepted, {}}}});
  CHECK(node.state() == NodeState::kEstablished);
}

TEST_CASE("rejected setup returns the node to Idle") {
  NodeEndpoint node(NodeInfo{kNode, 100, 17}, nullptr);
  node.handle(node_event::Connected{});
  node.handle(node_event::Received{E2Message{1, E2SetupResponse{kNode, Status::kRejected, "DuplicateNode"}}});
  CHECK(node.state() == NodeState::kIdle);
  auto out = node.handle(node_event::Received{E2Message{2, RicSubscriptionRequest{}}});
  REQUIRE(out.size() == 1);
  CHECK(out[0].as<ProtocolError>()->cause == "NotConnected");
}

TEST_CASE("subscription validation") {
  ran::Cell cell(small_cell());
  NodeEndpoint node = established(cell);
  auto reply = [&](RicSubscriptionRequest req) {
    auto out = node.handle(node_event::Received{E2Message{9, std::move(req)}});
    REQUIRE(out.size() == 1);
    CHECK(out[0].transaction_id == 9u);
    return *out[0].as<RicSubscriptionResponse>();
  };
  CHECK(reply({1, kNode, "x", 50, {}}).reason == "PeriodTooSmall");
  CHECK(reply({1, NodeId("gnb:311-048-0000000a"), "x", 250, {}}).reason == "UnknownNode");
  CHECK(reply({1, kNode, "x", 250, {"dl_tx_tbs", "nope"}}).reason == "UnknownMetric");
  const auto ok = reply({1, kNode, "x", 250, {"dl_tx_tbs"}});
  CHECK(ok.status == Status::kAccepted);
  CHECK(ok.reason.empty());
  CHECK(reply({1, kNode, "x", 250, {}}).reason == "DuplicateSubscription");
  CHECK(reply({2, kNode, "x", 100, {}}).status == Status::kAccepted);
  CHECK(node.subscription_count() == 2);
}

TEST_CASE("control requests are applied or rejected with the error name") {
  ran::Cell cell(small_cell());
  NodeEndpoint node = established(cell);
  cell.run(10);

  ran::ControlDirective good;
  good.slice_allocation = std::map<ran::SliceId, ran::RbgRange>{{0, {0, 12}}, {1, {13, 16}}};
  auto out = node.handle(node_event::Received{E2Message{4, RicControlRequest{kNode, "x", good}}});
  REQUIRE(out.size() == 1);
  const auto* ack = out[0].as<RicControlAck>();
  CHECK(ack->status == Status::kApplied);
  CHECK(ack->effective_tti == 10);  // TTIs 0..9 have run; the next one is 10

  ran::ControlDirective bad;
  bad.slice_allocation = std::map<ran::SliceId, ran::RbgRange>{{0, {0, 9}}, {1, {9, 16}}};
  out = node.handle(node_event::Received{E2Message{5, RicControlRequest{kNode, "x", bad}}});
  CHECK(out[0].as<RicControlAck>()->status == Status::kRejected);
  CHECK(out[0].as<RicControlAck>()->reason == "OverlappingRbgRanges");
}

TEST_CASE("protocol errors are never answered") {
  NodeEndpoint node(NodeInfo{kNode, 100, 17}, nullptr);
  CHECK(node.handle(node_event::Received{make_protocol_error("X")}).empty());
  node.handle(node_event::Connected{});
  CHECK(node.handle(node_event::Received{make_protocol_error("X")}).empty());
  RicLink link;
  AcceptAll dir;
  CHECK(link.on_message(make_protocol_error("X"), dir).to_node.empty());
}

TEST_CASE("ric link registration and duplicates") {
  std::set<std::string> known;
  struct Dir : NodeDirectory {
    std::set<std::string>* known;
    bool register_node(const E2SetupRequest& s) override { return known->insert(s.node_id.str()).second; }
  } dir;
  dir.known = &known;

  RicLink a;
  CHECK_FALSE(a.subscription({}, 1).has_value());
  auto out = a.on_message(E2Message{1, RicIndication{}}, dir);
  CHECK(out.to_node.at(0).as<ProtocolError>()->cause == "SetupRequired");
  out = a.on_message(E2Message{2, E2SetupRequest{kNode, 100, 17}}, dir);
  CHECK(a.state() == LinkState::kRegistered);
  CHECK(out.to_node.at(0).as<E2SetupResponse>()->status == Status::kAccepted);
  CHECK(out.to_node.at(0).transaction_id == 2u);
  out = a.on_message(E2Message{3, E2SetupRequest{kNode, 100, 17}}, dir);
  CHECK(out.to_node.at(0).as<ProtocolError>()->cause == "DuplicateSetup");

  RicLink b;
  out = b.on_message(E2Message{1, E2SetupRequest{kNode, 100, 17}}, dir);
  CHECK(out.to_node.at(0).as<E2SetupResponse>()->status == Status::kRejected);
  CHECK(out.to_node.at(0).as<E2SetupResponse>()->reason == "DuplicateNode");
  CHECK(b.state() == LinkState::kAwaitingSetup);

  out = a.on_message(E2Message{7, RicIndication{}}, dir);
  CHECK(out.upcalls.size() == 1);
  CHECK(out.to_node.empty());
}

TEST_CASE("all interleavings to depth 6 respect the state machines") {
  testing::FsmModel model;
  const auto report = model.explore(6);
  MESSAGE("sequences " << report.sequences << ", transitions " << report.transitions);
  CHECK(report.max_depth == 6);
  CHECK(report.sequences > 1000);
  for (std::size_t i = 0; i < std::min<std::size_t>(report.violations.size(), 5); ++i) {
    MESSAGE(report.violations[i]);
  }
  CHECK(report.violations.empty());
}

TEST_CASE("indications arrive every 250 ms of simulated time over the loopback bus") {
  ran::Cell cell(small_cell());
  NodeEndpoint node(NodeInfo{kNode, 100, 17}, [&](const ran::ControlDirective& d) { return cell.apply_control(d); });
  RicLink link;
  AcceptAll dir;
  LoopbackBus bus;
  std::vector<RicIndication> indications;
  FrameReader node_rx, ric_rx;
  std::shared_ptr<FrameSink> to_ric, to_node;

  auto node_send = [&](const std::vector<E2Message>& msgs) {
    for (const auto& m : msgs) to_ric->send(m);
  };
  auto pipe = bus.connect(
      [&](std::span<const std::uint8_t> bytes) {
        node_rx.feed(bytes);
        for (auto r = node_rx.next(); r.ok(); r = node_rx.next()) node_send(node.handle(node_event::Received{*r.message}));
      },
      [&](std::span<const std::uint8_t> bytes) {
        ric_rx.feed(bytes);
        for (auto r = ric_rx.next(); r.ok(); r = ric_rx.next()) {
          auto out = link.on_message(*r.message, dir);
          for (const auto& m : out.to_node) to_node->send(m);
          for (const auto& up : out.upcalls) {
            if (const auto* ind = up.as<RicIndication>()) indications.push_back(*ind);
          }
        }
      });
  to_ric = pipe.a_to_b;
  to_node = pipe.b_to_a;

  node_send(node.handle(node_event::Connected{}));
  bus.pump();
  REQUIRE(link.state() == LinkState::kRegistered);
  to_node->send(*link.subscription({1, kNode, "xapp", 250, {}}, 1));
  bus.pump();

  for (int t = 0; t < 10000; ++t) {
    cell.step();
    if (cell.window_due()) node.handle(node_event::KpmWindow{cell.emit_kpm_window()});
    node_send(node.handle(node_event::Tick{cell.now_ms()}));
    bus.pump();
  }

  REQUIRE(indications.size() == 40);
  std::size_t records = 0;
  for (std::size_t k = 0; k < indications.size(); ++k) {
    const std::int64_t expected = 250 * static_cast<std::int64_t>(k + 1);
    CHECK(std::llabs(indications[k].ts_ms - expected) <= 1);
    CHECK(indications[k].seq == k);
    records += indications[k].records.size();
  }
  // every closed window reached the RIC exactly once: 100 windows x 2 UEs
  CHECK(records == 200);
}
