// SPDX-License-Identifier: Apache-2.0
#include "orgym/e2/tcp.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "orgym/common/error.hpp"

namespace orgym::e2 {

TcpConnection::TcpConnection(int fd) : fd_(fd) {
  int one = 1;
  ::setsockopt(fd_, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
}

TcpConnection::~TcpConnection() {
  close();
  join();
  ::close(fd_);
}

void TcpConnection::join() {
  if (reader_.joinable()) {
    if (reader_.get_id() == std::this_thread::get_id()) {
      reader_.detach();
    } else {
      reader_.join();
    }
  }
}

void TcpConnection::start(ByteReceiver on_bytes, std::function<void()> on_closed) {
  reader_ = std::thread([this, on_bytes = std::move(on_bytes), on_closed = std::move(on_closed)] {
    std::vector<std::uint8_t> buf(64 * 1024);
    while (open_.load()) {
      const ssize_t n = ::recv(fd_, buf.data(), buf.size(), 0);
      if (n < 0 && errno == EINTR) continue;
      if (n <= 0) break;
      on_bytes(std::span<const std::uint8_t>(buf.data(), static_cast<std::size_t>(n)));
    }
    open_.store(false);
    if (on_closed) on_closed();
  });
}

void TcpConnection::send(std::span<const std::uint8_t> bytes) {
  std::lock_guard<std::mutex> lock(write_mu_);
  std::size_t sent = 0;
  while (open_.load() && sent < bytes.size()) {
    const ssize_t n = ::send(fd_, bytes.data() + sent, bytes.size() - sent, MSG_NOSIGNAL);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) {
      open_.store(false);
      return;
    }
    sent += static_cast<std::size_t>(n);
  }
}

void TcpConnection::close() {
  if (open_.exchange(false)) ::shutdown(fd_, SHUT_RDWR);
}

std::shared_ptr<TcpConnection> tcp_connect(const std::string& host, std::uint16_t port) {
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  if (::getaddrinfo(host.c_str(), std::to_string(port).c_str(), &hints, &res) != 0 || res == nullptr) {
    throw Error(ErrorCode::kIo, host, "cannot resolve");
  }
  const int fd = ::socket(res->ai_family, res->ai_socktype, res->ai_protocol);
  if (fd < 0) {
    ::freeaddrinfo(res);
    throw Error(ErrorCode::kIo, host, std::strerror(errno));
  }
  if (::connect(fd, res->ai_addr, res->ai_addrlen) != 0) {
    const int err = errno;
    ::freeaddrinfo(res);
    ::close(fd);
    throw Error(ErrorCode::kIo, host + ":" + std::to_string(port), std::strerror(err));
  }
  ::freeaddrinfo(res);
  return std::make_shared<TcpConnection>(fd);
}

TcpListener::TcpListener(std::uint16_t port, AcceptHandler on_accept) {
  fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd_ < 0) throw Error(ErrorCode::kIo, "listen", std::strerror(errno));
  int one = 1;
  ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = htons(port);
  if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0 || ::listen(fd_, 16) != 0) {
    const int err = errno;
    ::close(fd_);
    throw Error(ErrorCode::kIo, "port " + std::to_string(port), std::strerror(err));
  }
  socklen_t len = sizeof(addr);
  ::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);

  acceptor_ = std::thread([this, on_accept = std::move(on_accept)] {
    while (running_.load()) {
      const int client = ::accept(fd_, nullptr, nullptr);
      if (client < 0) {
        if (errno == EINTR) continue;
        break;
      }
      on_accept(std::make_shared<TcpConnection>(client));
    }
  });
}

TcpListener::~TcpListener() {
  stop();
  ::close(fd_);
}

void TcpListener::stop() {
  if (running_.exchange(false)) ::shutdown(fd_, SHUT_RDWR);
  if (acceptor_.joinable()) acceptor_.join();
}

}  // namespace orgym::e2
