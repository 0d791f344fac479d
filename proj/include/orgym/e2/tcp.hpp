// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "orgym/e2/transport.hpp"

namespace orgym::e2 {

// Blocking POSIX stream socket with a reader thread that hands received
// bytes to a callback. send() is safe from any thread.
class TcpConnection : public FrameSink, public std::enable_shared_from_this<TcpConnection> {
 public:
  explicit TcpConnection(int fd);
  ~TcpConnection() override;

  // Starts the reader; on_closed runs once when the peer hangs up or close() is called.
  void start(ByteReceiver on_bytes, std::function<void()> on_closed);

  void send(std::span<const std::uint8_t> bytes) override;
  void close() override;
  // Waits for the reader thread; no-op from the reader itself.
  void join();
  bool open() const override { return open_.load(); }
  using FrameSink::send;

 private:
  int fd_;
  std::atomic<bool> open_{true};
  std::mutex write_mu_;
  std::thread reader_;
};

// Connects to host:port; throws orgym::Error(kIo) on failure.
std::shared_ptr<TcpConnection> tcp_connect(const std::string& host, std::uint16_t port);

class TcpListener {
 public:
  using AcceptHandler = std::function<void(std::shared_ptr<TcpConnection>)>;

  // Binds 127.0.0.1:port (0 picks a free port); throws orgym::Error(kIo).
  TcpListener(std::uint16_t port, AcceptHandler on_accept);
  ~TcpListener();
  TcpListener(const TcpListener&) = delete;
  TcpListener& operator=(const TcpListener&) = delete;

  std::uint16_t port() const { return port_; }
  void stop();

 private:
  int fd_ = -1;
  std::uint16_t port_ = 0;
  std::atomic<bool> running_{true};
  std::thread acceptor_;
};

}  // namespace orgym::e2
