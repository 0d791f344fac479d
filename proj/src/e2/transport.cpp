// SPDX-License-Identifier: Apache-2.0
#include "orgym/e2/transport.hpp"

#include <vector>

namespace orgym::e2 {

struct LoopbackBus::State {
  struct Link {
    bool open = true;
  };
  struct Chunk {
    std::shared_ptr<Link> link;
    ByteReceiver* receiver;
    Bytes bytes;
  };
  std::deque<Chunk> queue;
  std::vector<std::unique_ptr<ByteReceiver>> receivers;
};

namespace {

class LoopbackSink : public FrameSink {
 public:
  LoopbackSink(std::weak_ptr<LoopbackBus::State> bus, std::shared_ptr<LoopbackBus::State::Link> link,
               ByteReceiver* receiver)
      : bus_(std::move(bus)), link_(std::move(link)), receiver_(receiver) {}

  void send(std::span<const std::uint8_t> bytes) override {
    auto bus = bus_.lock();
    if (!bus || !link_->open) return;
    bus->queue.push_back({link_, receiver_, Bytes(bytes.begin(), bytes.end())});
  }
  void close() override { link_->open = false; }
  bool open() const override { return link_->open; }
  using FrameSink::send;

 private:
  std::weak_ptr<LoopbackBus::State> bus_;
  std::shared_ptr<LoopbackBus::State::Link> link_;
  ByteReceiver* receiver_;
};

}  // namespace

LoopbackBus::LoopbackBus() : state_(std::make_shared<State>()) {}
LoopbackBus::~LoopbackBus() = default;

LoopbackBus::Pipe LoopbackBus::connect(ByteReceiver a_receive, ByteReceiver b_receive) {
  auto link = std::make_shared<State::Link>();
  state_->receivers.push_back(std::make_unique<ByteReceiver>(std::move(a_receive)));
  ByteReceiver* a_rx = state_->receivers.back().get();
  state_->receivers.push_back(std::make_unique<ByteReceiver>(std::move(b_receive)));
  ByteReceiver* b_rx = state_->receivers.back().get();
  return Pipe{std::make_shared<LoopbackSink>(state_, link, b_rx), std::make_shared<LoopbackSink>(state_, link, a_rx)};
}

std::size_t LoopbackBus::pump() {
  std::size_t delivered = 0;
  while (!state_->queue.empty()) {
    State::Chunk chunk = std::move(state_->queue.front());
    state_->queue.pop_front();
    if (!chunk.link->open) continue;
    (*chunk.receiver)(std::span<const std::uint8_t>(chunk.bytes));
    ++delivered;
  }
  return delivered;
}

std::size_t LoopbackBus::queued() const { return state_->queue.size(); }

}  // namespace orgym::e2
