// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <span>
#include <utility>

#include "orgym/e2/codec.hpp"

namespace orgym::e2 {

// Outbound half of a reliable byte stream.
class FrameSink {
 public:
  virtual ~FrameSink() = default;
  virtual void send(std::span<const std::uint8_t> bytes) = 0;
  virtual void close() = 0;
  virtual bool open() const = 0;

  void send(const E2Message& msg) {
    const Bytes frame = encode_frame(msg);
    send(std::span<const std::uint8_t>(frame));
  }
};

using ByteReceiver = std::function<void(std::span<const std::uint8_t>)>;

// Deterministic in-process transport. Sends are queued on one global FIFO
// and delivered only by pump(), so a single-threaded driver fully controls
// interleaving. Closing either end of a pipe drops its undelivered bytes.
class LoopbackBus {
 public:
  struct Pipe {
    std::shared_ptr<FrameSink> a_to_b;
    std::shared_ptr<FrameSink> b_to_a;
  };

  LoopbackBus();
  ~LoopbackBus();
  LoopbackBus(const LoopbackBus&) = delete;
  LoopbackBus& operator=(const LoopbackBus&) = delete;

  Pipe connect(ByteReceiver a_receive, ByteReceiver b_receive);

  // Delivers queued chunks in send order, including chunks queued by the
  // receivers while pumping. Returns the number of chunks delivered.
  std::size_t pump();
  std::size_t queued() const;

  struct State;

 private:
  std::shared_ptr<State> state_;
};

}  // namespace orgym::e2
