// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <mutex>
#include <vector>

#include "orgym/e2/tcp.hpp"
#include "orgym/ric/ric.hpp"

namespace orgym::ric {

// Accepts E2-lite connections (nodes or remote xApps) for a Ric.
class RicTcpServer {
 public:
  RicTcpServer(Ric& ric, std::uint16_t port);
  ~RicTcpServer();

  std::uint16_t port() const { return listener_->port(); }
  void stop();

 private:
  Ric& ric_;
  std::mutex mu_;
  std::vector<std::shared_ptr<e2::TcpConnection>> connections_;
  std::unique_ptr<e2::TcpListener> listener_;
};

}  // namespace orgym::ric
