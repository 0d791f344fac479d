// SPDX-License-Identifier: Apache-2.0
// Near-RT RIC core: connection termination, node registry, subscription
// routing and control forwarding.
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "orgym/e2/ric_link.hpp"
#include "orgym/e2/transport.hpp"
#include "orgym/ric/clock.hpp"

namespace orgym::ric {

using ConnectionId = std::uint64_t;

struct NodeRecord {
  e2::NodeId node_id;
  ConnectionId connection = 0;
  std::int64_t connected_at_ms = 0;
  std::optional<std::int64_t> last_indication_at_ms;
  std::vector<std::uint32_t> subscriptions;
  int kpm_window_ms = 0;
  int rbg_count = 0;
  friend bool operator==(const NodeRecord&, const NodeRecord&) = default;
};

struct Route {
  e2::NodeId node_id;
  std::string xapp_id;
  int report_period_ms = 0;
  friend bool operator==(const Route&, const Route&) = default;
};

using RoutingTable = std::map<std::uint32_t, Route>;

// Callbacks to one xApp. Invoked without any RIC lock held; `tag` is the
// value the xApp passed with the originating request.
class XappSink {
 public:
  virtual ~XappSink() = default;
  virtual void on_indication(const e2::RicIndication& indication) = 0;
  virtual void on_subscription_response(std::uint32_t tag, const e2::RicSubscriptionResponse& response) = 0;
  // status kTimeout when the node did not answer in time.
  virtual void on_control_ack(std::uint32_t tag, const e2::RicControlAck& ack) = 0;
};

struct RicOptions {
  // Fixed control timeout; when unset, two report periods of the xApp's
  // subscription to the node (or two KPM windows without one).
  std::optional<std::int64_t> control_timeout_ms;
  std::ostream* log = nullptr;  // JSON lines
  std::string snapshot_path;    // registry snapshot rewritten on change
};

class Ric {
 public:
  Ric(const Clock& clock, RicOptions options = {});
  ~Ric();
  Ric(const Ric&) = delete;
  Ric& operator=(const Ric&) = delete;

  // Byte-stream endpoints. The peer's role (node or remote xApp) is fixed by
  // its first message: E2SetupRequest makes it a node, a subscription or
  // control request makes it an xApp.
  ConnectionId accept(std::shared_ptr<e2::FrameSink> sink);
  void on_bytes(ConnectionId id, std::span<const std::uint8_t> bytes);
  void on_closed(ConnectionId id);

  // In-process xApps. Throws Error(kInvalidValue) for a duplicate id.
  void register_xapp(const std::string& xapp_id, XappSink* sink);
  void unregister_xapp(const std::string& xapp_id);

  // Returns the assigned sub_id; the node's response reaches the xApp later
  // with `tag`. Throws UnknownNode, UnknownXapp or PeriodTooSmall.
  std::uint32_t subscribe(const std::string& xapp_id, const e2::NodeId& node_id, int report_period_ms,
                          std::vector<std::string> metric_set, std::uint32_t tag = 0);

  // Sends the directive to the node named by directive.target. Throws
  // UnknownNode or UnknownXapp.
  void forward_control(const std::string& xapp_id, const ran::ControlDirective& directive, std::uint32_t tag = 0);

  // Surfaces expired controls as timeout acks.
  void poll();

  std::vector<NodeRecord> list_nodes() const;
  RoutingTable routes() const;
  std::vector<std::string> xapps() const;
  std::size_t pending_controls() const;
  // Indications dropped for an unknown sub_id.
  std::size_t dropped_indications() const;

 private:
  struct Connection;
  struct PendingControl {
    std::string xapp_id;
    e2::NodeId node_id;
    std::uint32_t tag = 0;
    std::int64_t deadline_ms = 0;
  };
  class RemoteXapp;
  class Directory;
  struct XappEntry {
    XappSink* sink = nullptr;
    std::shared_ptr<XappSink> keep;  // owns remote xApp relays
  };
  using Work = std::vector<std::function<void()>>;

  void handle_message(Connection& conn, const e2::E2Message& msg, Work& work);
  void handle_node_message(Connection& conn, const e2::E2Message& msg, Work& work);
  void handle_xapp_message(Connection& conn, const e2::E2Message& msg, Work& work);
  void route_upcall(const e2::E2Message& msg, Work& work);
  std::uint32_t subscribe_locked(const std::string& xapp_id, const e2::NodeId& node_id, int period,
                                 std::vector<std::string> metrics, std::uint32_t tag, Work& work);
  void control_locked(const std::string& xapp_id, const ran::ControlDirective& directive, std::uint32_t tag,
                      Work& work);
  void close_locked(ConnectionId id);
  std::vector<NodeRecord> list_nodes_unlocked() const;
  void evict_node(const e2::NodeId& node_id);
  void drop_xapp(const std::string& xapp_id);
  void log_line(const std::string& line);
  void write_snapshot();
  static void run(Work& work);

  const Clock& clock_;
  RicOptions options_;
  mutable std::mutex mu_;
  std::mutex log_mu_;
  ConnectionId next_connection_ = 1;
  std::uint32_t next_sub_id_ = 1;
  std::uint32_t next_transaction_ = 1;
  std::map<ConnectionId, std::unique_ptr<Connection>> connections_;
  std::map<e2::NodeId, NodeRecord> nodes_;
  std::map<std::string, XappEntry> xapps_;
  RoutingTable routes_;
  std::map<std::uint32_t, std::uint32_t> sub_tags_;
  std::map<std::uint32_t, PendingControl> pending_;  // by transaction id
  std::size_t dropped_ = 0;
};

}  // namespace orgym::ric
