// SPDX-License-Identifier: Apache-2.0
#include "orgym/ric/tcp_server.hpp"

namespace orgym::ric {

RicTcpServer::RicTcpServer(Ric& ric, std::uint16_t port) : ric_(ric) {
  listener_ = std::make_unique<e2::TcpListener>(port, [this](std::shared_ptr<e2::TcpConnection> conn) {
    const ConnectionId id = ric_.accept(conn);
    {
      std::lock_guard<std::mutex> lock(mu_);
      connections_.push_back(conn);
    }
    conn->start([this, id](std::span<const std::uint8_t> bytes) { ric_.on_bytes(id, bytes); },
                [this, id] { ric_.on_closed(id); });
  });
}

RicTcpServer::~RicTcpServer() { stop(); }

void RicTcpServer::stop() {
  listener_->stop();
  std::vector<std::shared_ptr<e2::TcpConnection>> conns;
  {
    std::lock_guard<std::mutex> lock(mu_);
    conns.swap(connections_);
  }
  for (auto& c : conns) c->close();
  for (auto& c : conns) c->join();
}

}  // namespace orgym::ric
