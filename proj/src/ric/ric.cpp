// SPDX-License-Identifier: Apache-2.0
#include "orgym/ric/ric.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <json.hpp>

#include "orgym/common/error.hpp"
#include "orgym/common/log.hpp"
#include "orgym/ran/json_io.hpp"

namespace orgym::ric {

using nlohmann::json;

namespace {

enum class Role { kUnknown, kNode, kXapp };

json record_json(const NodeRecord& r) {
  json j;
  j["node_id"] = r.node_id.str();
  j["connected_at_ms"] = r.connected_at_ms;
  j["last_indication_at_ms"] = r.last_indication_at_ms ? json(*r.last_indication_at_ms) : json(nullptr);
  j["subscriptions"] = r.subscriptions;
  j["kpm_window_ms"] = r.kpm_window_ms;
  j["rbg_count"] = r.rbg_count;
  return j;
}

}  // namespace

// Relays RIC callbacks to an xApp connected over a byte stream.
class Ric::RemoteXapp : public XappSink {
 public:
  explicit RemoteXapp(std::shared_ptr<e2::FrameSink> sink) : sink_(std::move(sink)) {}
  void on_indication(const e2::RicIndication& ind) override { sink_->send(e2::E2Message{0, ind}); }
  void on_subscription_response(std::uint32_t tag, const e2::RicSubscriptionResponse& resp) override {
    sink_->send(e2::E2Message{tag, resp});
  }
  void on_control_ack(std::uint32_t tag, const e2::RicControlAck& ack) override {
    sink_->send(e2::E2Message{tag, ack});
  }

 private:
  std::shared_ptr<e2::FrameSink> sink_;
};

struct Ric::Connection {
  ConnectionId id = 0;
  std::shared_ptr<e2::FrameSink> sink;
  e2::FrameReader reader;
  Role role = Role::kUnknown;
  e2::RicLink link;
  std::int64_t connected_at_ms = 0;
  std::string xapp_id;
  std::shared_ptr<RemoteXapp> remote;
};

class Ric::Directory : public e2::NodeDirectory {
 public:
  Directory(Ric& ric, Connection& conn) : ric_(ric), conn_(conn) {}
  bool register_node(const e2::E2SetupRequest& setup) override {
    if (ric_.nodes_.contains(setup.node_id)) return false;
    ric_.nodes_[setup.node_id] =
        NodeRecord{setup.node_id, conn_.id, conn_.connected_at_ms, std::nullopt, {}, setup.kpm_window_ms,
                   setup.rbg_count};
    return true;
  }

 private:
  Ric& ric_;
  Connection& conn_;
};

Ric::Ric(const Clock& clock, RicOptions options) : clock_(clock), options_(std::move(options)) {}
Ric::~Ric() = default;

void Ric::run(Work& work) {
  for (auto& fn : work) fn();
  work.clear();
}

void Ric::log_line(const std::string& line) {
  orgym::log::debug(line);
  if (options_.log == nullptr) return;
  std::lock_guard<std::mutex> lock(log_mu_);
  *options_.log << line << '\n';
}

namespace {

std::string event_line(std::int64_t ts_ms, const char* event, json fields) {
  fields["ts_ms"] = ts_ms;
  fields["event"] = event;
  return fields.dump();
}

}  // namespace

void Ric::write_snapshot() {
  if (options_.snapshot_path.empty()) return;
  json j;
  j["nodes"] = json::array();
  for (const auto& rec : list_nodes_unlocked()) j["nodes"].push_back(record_json(rec));
  j["routes"] = json::object();
  for (const auto& [sub, route] : routes_) {
    j["routes"][std::to_string(sub)] = {
        {"node_id", route.node_id.str()}, {"xapp_id", route.xapp_id}, {"report_period_ms", route.report_period_ms}};
  }
  const std::string tmp = options_.snapshot_path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << j.dump(2) << '\n';
  }
  std::rename(tmp.c_str(), options_.snapshot_path.c_str());
}

std::vector<NodeRecord> Ric::list_nodes_unlocked() const {
  std::vector<NodeRecord> out;
  for (const auto& [id, rec] : nodes_) out.push_back(rec);
  std::stable_sort(out.begin(), out.end(), [](const NodeRecord& a, const NodeRecord& b) {
    return a.connected_at_ms != b.connected_at_ms ? a.connected_at_ms < b.connected_at_ms
                                                  : a.connection < b.connection;
  });
  return out;
}

ConnectionId Ric::accept(std::shared_ptr<e2::FrameSink> sink) {
  std::lock_guard<std::mutex> lock(mu_);
  auto conn = std::make_unique<Connection>();
  conn->id = next_connection_++;
  conn->sink = std::move(sink);
  conn->connected_at_ms = clock_.now_ms();
  const ConnectionId id = conn->id;
  connections_[id] = std::move(conn);
  return id;
}

void Ric::on_bytes(ConnectionId id, std::span<const std::uint8_t> bytes) {
  Work work;
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = connections_.find(id);
    if (it == connections_.end()) return;
    Connection& conn = *it->second;
    conn.reader.feed(bytes);
    for (auto r = conn.reader.next(); r.status != e2::DecodeStatus::kNeedMoreBytes; r = conn.reader.next()) {
      if (r.ok()) {
        handle_message(conn, *r.message, work);
        continue;
      }
      log_line(event_line(clock_.now_ms(), "error",
                          {{"connection", id}, {"cause", e2::to_string(r.status)}, {"detail", r.detail}}));
      if (conn.reader.poisoned()) {
        auto sink = conn.sink;
        work.push_back([sink] { sink->close(); });
        close_locked(id);
        break;
      }
      auto sink = conn.sink;
      auto err = e2::make_protocol_error(std::string(e2::to_string(r.status)), r.detail);
      work.push_back([sink, err] { sink->send(err); });
    }
  }
  run(work);
}

void Ric::on_closed(ConnectionId id) {
  std::lock_guard<std::mutex> lock(mu_);
  close_locked(id);
}

void Ric::close_locked(ConnectionId id) {
  auto it = connections_.find(id);
  if (it == connections_.end()) return;
  Connection& conn = *it->second;
  if (conn.role == Role::kNode && conn.link.state() == e2::LinkState::kRegistered) {
    const e2::NodeId node = *conn.link.node_id();
    auto rec = nodes_.find(node);
    if (rec != nodes_.end() && rec->second.connection == id) {
      evict_node(node);
      log_line(event_line(clock_.now_ms(), "disconnect", {{"node_id", node.str()}}));
    }
  } else if (conn.role == Role::kXapp) {
    drop_xapp(conn.xapp_id);
    log_line(event_line(clock_.now_ms(), "disconnect", {{"xapp_id", conn.xapp_id}}));
  }
  conn.link.close();
  connections_.erase(it);
  write_snapshot();
}

void Ric::evict_node(const e2::NodeId& node_id) {
  nodes_.erase(node_id);
  for (auto it = routes_.begin(); it != routes_.end();) {
    if (it->second.node_id == node_id) {
      sub_tags_.erase(it->first);
      it = routes_.erase(it);
    } else {
      ++it;
    }
  }
  // In-flight controls to this node are left to time out.
}

void Ric::drop_xapp(const std::string& xapp_id) {
  xapps_.erase(xapp_id);
  for (auto it = routes_.begin(); it != routes_.end();) {
    if (it->second.xapp_id == xapp_id) {
      if (auto rec = nodes_.find(it->second.node_id); rec != nodes_.end()) std::erase(rec->second.subscriptions, it->first);
      sub_tags_.erase(it->first);
      it = routes_.erase(it);
    } else {
      ++it;
    }
  }
  std::erase_if(pending_, [&](const auto& kv) { return kv.second.xapp_id == xapp_id; });
}

void Ric::register_xapp(const std::string& xapp_id, XappSink* sink) {
  std::lock_guard<std::mutex> lock(mu_);
  if (xapps_.contains(xapp_id)) throw Error(ErrorCode::kInvalidValue, xapp_id, "xApp already registered");
  xapps_[xapp_id] = XappEntry{sink, nullptr};
  log_line(event_line(clock_.now_ms(), "xapp", {{"xapp_id", xapp_id}}));
}

void Ric::unregister_xapp(const std::string& xapp_id) {
  std::lock_guard<std::mutex> lock(mu_);
  drop_xapp(xapp_id);
  write_snapshot();
}

void Ric::handle_message(Connection& conn, const e2::E2Message& msg, Work& work) {
  if (conn.role == Role::kUnknown) {
    const auto type = msg.type();
    if (type == e2::MsgType::kE2SetupRequest) {
      conn.role = Role::kNode;
    } else if (type == e2::MsgType::kRicSubscriptionRequest || type == e2::MsgType::kRicControlRequest) {
      const std::string& xapp_id =
          msg.as<e2::RicSubscriptionRequest>() ? msg.as<e2::RicSubscriptionRequest>()->xapp_id
                                               : msg.as<e2::RicControlRequest>()->xapp_id;
      auto sink = conn.sink;
      if (xapps_.contains(xapp_id)) {
        auto err = e2::make_protocol_error("DuplicateXapp", xapp_id, msg.transaction_id);
        work.push_back([sink, err] { sink->send(err); });
        return;
      }
      conn.role = Role::kXapp;
      conn.xapp_id = xapp_id;
      conn.remote = std::make_shared<RemoteXapp>(sink);
      xapps_[xapp_id] = XappEntry{conn.remote.get(), conn.remote};
      log_line(event_line(clock_.now_ms(), "xapp", {{"xapp_id", xapp_id}, {"connection", conn.id}}));
    } else if (type != e2::MsgType::kProtocolError) {
      auto sink = conn.sink;
      auto err = e2::make_protocol_error("UnexpectedMessage", std::string(e2::to_string(type)), msg.transaction_id);
      work.push_back([sink, err] { sink->send(err); });
      return;
    } else {
      return;
    }
  }
  if (conn.role == Role::kNode) {
    handle_node_message(conn, msg, work);
  } else {
    handle_xapp_message(conn, msg, work);
  }
}

void Ric::handle_node_message(Connection& conn, const e2::E2Message& msg, Work& work) {
  const bool was_registered = conn.link.state() == e2::LinkState::kRegistered;
  Directory directory(*this, conn);
  e2::LinkOutput out = conn.link.on_message(msg, directory);
  if (!was_registered && conn.link.state() == e2::LinkState::kRegistered) {
    const NodeRecord& rec = nodes_.at(*conn.link.node_id());
    log_line(event_line(clock_.now_ms(), "setup",
                        {{"node_id", rec.node_id.str()}, {"kpm_window_ms", rec.kpm_window_ms},
                         {"rbg_count", rec.rbg_count}}));
    write_snapshot();
  }
  for (auto& m : out.to_node) {
    if (const auto* err = m.as<e2::ProtocolError>()) {
      log_line(event_line(clock_.now_ms(), "error", {{"connection", conn.id}, {"cause", err->cause}}));
    } else if (const auto* resp = m.as<e2::E2SetupResponse>(); resp && resp->status != e2::Status::kAccepted) {
      log_line(event_line(clock_.now_ms(), "error", {{"node_id", resp->node_id.str()}, {"cause", resp->reason}}));
    }
    auto sink = conn.sink;
    work.push_back([sink, m = std::move(m)] { sink->send(m); });
  }
  for (const auto& up : out.upcalls) route_upcall(up, work);
}

void Ric::handle_xapp_message(Connection& conn, const e2::E2Message& msg, Work& work) {
  auto sink = conn.sink;
  const std::uint32_t tid = msg.transaction_id;
  if (const auto* req = msg.as<e2::RicSubscriptionRequest>()) {
    try {
      subscribe_locked(conn.xapp_id, req->node_id, req->report_period_ms, req->metric_set, tid, work);
    } catch (const Error& e) {
      e2::RicSubscriptionResponse resp{0, req->node_id, e2::Status::kRejected, std::string(to_string(e.code()))};
      work.push_back([sink, tid, resp] { sink->send(e2::E2Message{tid, resp}); });
    }
  } else if (const auto* req = msg.as<e2::RicControlRequest>()) {
    ran::ControlDirective d = req->directive;
    if (d.target.empty()) d.target = req->node_id.str();
    try {
      control_locked(conn.xapp_id, d, tid, work);
    } catch (const Error& e) {
      e2::RicControlAck ack{req->node_id, e2::Status::kRejected, std::string(to_string(e.code())), 0};
      work.push_back([sink, tid, ack] { sink->send(e2::E2Message{tid, ack}); });
    }
  } else if (msg.type() != e2::MsgType::kProtocolError) {
    auto err = e2::make_protocol_error("UnexpectedMessage", std::string(e2::to_string(msg.type())), tid);
    work.push_back([sink, err] { sink->send(err); });
  }
}

void Ric::route_upcall(const e2::E2Message& msg, Work& work) {
  const std::int64_t now = clock_.now_ms();
  if (const auto* ind = msg.as<e2::RicIndication>()) {
    auto route = routes_.find(ind->sub_id);
    if (route == routes_.end() || route->second.node_id != ind->node_id) {
      ++dropped_;
      log_line(event_line(now, "error",
                          {{"cause", "UnknownSubscription"}, {"sub_id", ind->sub_id}, {"node_id", ind->node_id.str()}}));
      return;
    }
    if (auto rec = nodes_.find(ind->node_id); rec != nodes_.end()) rec->second.last_indication_at_ms = now;
    log_line(event_line(now, "indication",
                        {{"sub_id", ind->sub_id}, {"seq", ind->seq}, {"node_id", ind->node_id.str()},
                         {"xapp_id", route->second.xapp_id}, {"records", ind->records.size()}}));
    auto xapp = xapps_.find(route->second.xapp_id);
    if (xapp == xapps_.end()) return;
    XappEntry entry = xapp->second;
    work.push_back([entry, ind = *ind] { entry.sink->on_indication(ind); });
  } else if (const auto* resp = msg.as<e2::RicSubscriptionResponse>()) {
    auto route = routes_.find(resp->sub_id);
    if (route == routes_.end()) {
      log_line(event_line(now, "error", {{"cause", "UnknownSubscription"}, {"sub_id", resp->sub_id}}));
      return;
    }
    const std::uint32_t tag = sub_tags_[resp->sub_id];
    const std::string xapp_id = route->second.xapp_id;
    log_line(event_line(now, "subscription_response",
                        {{"sub_id", resp->sub_id}, {"status", e2::to_string(resp->status)}, {"reason", resp->reason}}));
    if (resp->status != e2::Status::kAccepted) {
      if (auto rec = nodes_.find(resp->node_id); rec != nodes_.end()) std::erase(rec->second.subscriptions, resp->sub_id);
      routes_.erase(route);
      sub_tags_.erase(resp->sub_id);
      write_snapshot();
    }
    auto xapp = xapps_.find(xapp_id);
    if (xapp == xapps_.end()) return;
    XappEntry entry = xapp->second;
    work.push_back([entry, tag, resp = *resp] { entry.sink->on_subscription_response(tag, resp); });
  } else if (const auto* ack = msg.as<e2::RicControlAck>()) {
    auto pending = pending_.find(msg.transaction_id);
    if (pending == pending_.end()) {
      log_line(event_line(now, "error", {{"cause", "LateControlAck"}, {"transaction_id", msg.transaction_id}}));
      return;
    }
    const PendingControl pc = pending->second;
    const std::uint32_t tid = pending->first;
    pending_.erase(pending);
    log_line(event_line(now, "control_ack",
                        {{"node_id", ack->node_id.str()}, {"xapp_id", pc.xapp_id}, {"transaction_id", tid},
                         {"status", e2::to_string(ack->status)},
                         {"reason", ack->reason}, {"effective_tti", ack->effective_tti}}));
    auto xapp = xapps_.find(pc.xapp_id);
    if (xapp == xapps_.end()) return;
    XappEntry entry = xapp->second;
    work.push_back([entry, tag = pc.tag, ack = *ack] { entry.sink->on_control_ack(tag, ack); });
  } else if (const auto* err = msg.as<e2::ProtocolError>()) {
    log_line(event_line(now, "error", {{"cause", err->cause}, {"detail", err->detail}, {"from", "node"}}));
  }
}

std::uint32_t Ric::subscribe(const std::string& xapp_id, const e2::NodeId& node_id, int report_period_ms,
                             std::vector<std::string> metric_set, std::uint32_t tag) {
  Work work;
  std::uint32_t sub = 0;
  {
    std::lock_guard<std::mutex> lock(mu_);
    sub = subscribe_locked(xapp_id, node_id, report_period_ms, std::move(metric_set), tag, work);
  }
  run(work);
  return sub;
}

std::uint32_t Ric::subscribe_locked(const std::string& xapp_id, const e2::NodeId& node_id, int period,
                                    std::vector<std::string> metrics, std::uint32_t tag, Work& work) {
  if (!xapps_.contains(xapp_id)) throw Error(ErrorCode::kUnknownXapp, xapp_id, "xApp not registered");
  auto rec = nodes_.find(node_id);
  if (rec == nodes_.end()) throw Error(ErrorCode::kUnknownNode, node_id.str(), "node not registered");
  if (period < rec->second.kpm_window_ms) {
    throw Error(ErrorCode::kPeriodTooSmall, "report_period_ms",
                std::to_string(period) + " ms is below the node's " + std::to_string(rec->second.kpm_window_ms) +
                    " ms KPM window");
  }
  Connection& conn = *connections_.at(rec->second.connection);
  const std::uint32_t sub = next_sub_id_++;
  auto msg = conn.link.subscription(e2::RicSubscriptionRequest{sub, node_id, xapp_id, period, std::move(metrics)},
                                    next_transaction_++);
  routes_[sub] = Route{node_id, xapp_id, period};
  sub_tags_[sub] = tag;
  rec->second.subscriptions.push_back(sub);
  log_line(event_line(clock_.now_ms(), "subscribe",
                      {{"sub_id", sub}, {"node_id", node_id.str()}, {"xapp_id", xapp_id}, {"report_period_ms", period}}));
  write_snapshot();
  auto sink = conn.sink;
  work.push_back([sink, m = *msg] { sink->send(m); });
  return sub;
}

void Ric::forward_control(const std::string& xapp_id, const ran::ControlDirective& directive, std::uint32_t tag) {
  Work work;
  {
    std::lock_guard<std::mutex> lock(mu_);
    control_locked(xapp_id, directive, tag, work);
  }
  run(work);
}

void Ric::control_locked(const std::string& xapp_id, const ran::ControlDirective& directive, std::uint32_t tag,
                         Work& work) {
  if (!xapps_.contains(xapp_id)) throw Error(ErrorCode::kUnknownXapp, xapp_id, "xApp not registered");
  const auto node_id = e2::NodeId::parse(directive.target);
  auto rec = node_id ? nodes_.find(*node_id) : nodes_.end();
  if (rec == nodes_.end()) throw Error(ErrorCode::kUnknownNode, directive.target, "node not registered");

  std::int64_t timeout = 2 * static_cast<std::int64_t>(rec->second.kpm_window_ms);
  if (options_.control_timeout_ms) {
    timeout = *options_.control_timeout_ms;
  } else {
    std::optional<int> period;
    for (const auto& [sub, route] : routes_) {
      if (route.node_id == *node_id && route.xapp_id == xapp_id) {
        period = std::min(period.value_or(route.report_period_ms), route.report_period_ms);
      }
    }
    if (period) timeout = 2 * static_cast<std::int64_t>(*period);
  }

  Connection& conn = *connections_.at(rec->second.connection);
  const std::uint32_t tid = next_transaction_++;
  auto msg = conn.link.control(e2::RicControlRequest{*node_id, xapp_id, directive}, tid);
  pending_[tid] = PendingControl{xapp_id, *node_id, tag, clock_.now_ms() + timeout};
  log_line(event_line(clock_.now_ms(), "control",
                      {{"node_id", node_id->str()}, {"xapp_id", xapp_id}, {"transaction_id", tid},
                       {"directive", ran::directive_to_json(directive)}}));
  auto sink = conn.sink;
  work.push_back([sink, m = *msg] { sink->send(m); });
}

void Ric::poll() {
  Work work;
  {
    std::lock_guard<std::mutex> lock(mu_);
    const std::int64_t now = clock_.now_ms();
    for (auto it = pending_.begin(); it != pending_.end();) {
      if (now < it->second.deadline_ms) {
        ++it;
        continue;
      }
      const PendingControl pc = it->second;
      const std::uint32_t tid = it->first;
      it = pending_.erase(it);
      log_line(event_line(now, "timeout", {{"node_id", pc.node_id.str()}, {"xapp_id", pc.xapp_id}, {"transaction_id", tid}}));
      auto xapp = xapps_.find(pc.xapp_id);
      if (xapp == xapps_.end()) continue;
      XappEntry entry = xapp->second;
      e2::RicControlAck ack{pc.node_id, e2::Status::kTimeout, "Timeout", 0};
      work.push_back([entry, tag = pc.tag, ack] { entry.sink->on_control_ack(tag, ack); });
    }
  }
  run(work);
}

std::vector<NodeRecord> Ric::list_nodes() const {
  std::lock_guard<std::mutex> lock(mu_);
  return list_nodes_unlocked();
}

RoutingTable Ric::routes() const {
  std::lock_guard<std::mutex> lock(mu_);
  return routes_;
}

std::vector<std::string> Ric::xapps() const {
  std::lock_guard<std::mutex> lock(mu_);
  std::vector<std::string> out;
  for (const auto& [id, entry] : xapps_) out.push_back(id);
  return out;
}

std::size_t Ric::pending_controls() const {
  std::lock_guard<std::mutex> lock(mu_);
  return pending_.size();
}

std::size_t Ric::dropped_indications() const {
  std::lock_guard<std::mutex> lock(mu_);
  return dropped_;
}

}  // namespace orgym::ric
