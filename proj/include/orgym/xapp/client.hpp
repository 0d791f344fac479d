// SPDX-License-Identifier: Apache-2.0
// How an xApp reaches the RIC: in-process calls or E2-lite over TCP.
#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "orgym/e2/tcp.hpp"
#include "orgym/ric/ric.hpp"

namespace orgym::xapp {

// Failures come back through the sink as rejected responses or acks, never
// as exceptions, so both transports behave alike.
class RicClient {
 public:
  virtual ~RicClient() = default;
  virtual void attach(const std::string& xapp_id, ric::XappSink* sink) = 0;
  virtual void detach() = 0;
  virtual void subscribe(const e2::NodeId& node, int report_period_ms, const std::vector<std::string>& metrics,
                         std::uint32_t tag) = 0;
  virtual void control(const ran::ControlDirective& directive, std::uint32_t tag) = 0;
};

class InProcessRicClient : public RicClient {
 public:
  explicit InProcessRicClient(ric::Ric& ric) : ric_(ric) {}
  ~InProcessRicClient() override { detach(); }
  void attach(const std::string& xapp_id, ric::XappSink* sink) override;
  void detach() override;
  void subscribe(const e2::NodeId& node, int report_period_ms, const std::vector<std::string>& metrics,
                 std::uint32_t tag) override;
  void control(const ran::ControlDirective& directive, std::uint32_t tag) override;

 private:
  ric::Ric& ric_;
  std::string xapp_id_;
  ric::XappSink* sink_ = nullptr;
};

// Speaks E2-lite to a RIC TCP port; the RIC learns the xApp id from the
// first request. Callbacks run on the connection's reader thread.
class TcpRicClient : public RicClient {
 public:
  TcpRicClient(std::string host, std::uint16_t port) : host_(std::move(host)), port_(port) {}
  ~TcpRicClient() override { detach(); }
  void attach(const std::string& xapp_id, ric::XappSink* sink) override;
  void detach() override;
  void subscribe(const e2::NodeId& node, int report_period_ms, const std::vector<std::string>& metrics,
                 std::uint32_t tag) override;
  void control(const ran::ControlDirective& directive, std::uint32_t tag) override;

 private:
  void on_bytes(std::span<const std::uint8_t> bytes);

  std::string host_;
  std::uint16_t port_;
  std::string xapp_id_;
  ric::XappSink* sink_ = nullptr;
  std::shared_ptr<e2::TcpConnection> conn_;
  e2::FrameReader reader_;
};

}  // namespace orgym::xapp
