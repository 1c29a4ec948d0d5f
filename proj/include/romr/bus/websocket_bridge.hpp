#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>

#include "romr/bus/topic_bus.hpp"

namespace romr::bus {

/// Bounded FIFO that evicts its oldest entry instead of refusing a push.
template <typename T>
class DropOldestQueue {
 public:
  explicit DropOldestQueue(std::size_t depth) : depth_(depth) {}

  /// Returns true when an older entry was evicted to make room.
  bool push(T v) {
    bool dropped = false;
    if (items_.size() >= depth_) {
      items_.pop_front();
      ++dropped_;
      dropped = true;
    }
    items_.push_back(std::move(v));
    return dropped;
  }
  std::optional<T> pop() {
    if (items_.empty()) return std::nullopt;
    T v = std::move(items_.front());
    items_.pop_front();
    return v;
  }
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  std::size_t dropped() const { return dropped_; }
  std::size_t depth() const { return depth_; }

 private:
  std::size_t depth_;
  std::deque<T> items_;
  std::size_t dropped_ = 0;
};

struct BridgeOptions {
  std::string address = "127.0.0.1";
  std::uint16_t port = 0;  // 0 picks a free port
  std::size_t queue_depth = 64;
  /// Stamp for client submissions, taken on arrival. Defaults to seconds
  /// on the steady clock since the bridge started.
  std::function<double()> clock;
  std::set<std::string> client_topics{"/cmd_vel"};  // what clients may publish
};

struct BridgeStats {
  std::size_t clients = 0;
  std::size_t dropped = 0;  // across all clients, including closed ones
  std::size_t rejected = 0;  // client requests answered with an error
};

/// WebSocket server speaking the UI JSON protocol. It owns one I/O thread
/// and reaches the bus only through subscribe and publish. Must not outlive
/// the bus.
class WebSocketBridge {
 public:
  WebSocketBridge(TopicBus& bus, BridgeOptions opts = {});
  ~WebSocketBridge();
  WebSocketBridge(const WebSocketBridge&) = delete;
  WebSocketBridge& operator=(const WebSocketBridge&) = delete;

  /// Binds and starts serving; throws BusError(Io) when the port is taken.
  void start();
  void stop();

  std::uint16_t port() const;
  BridgeStats stats() const;

  struct Impl;

 private:
  std::shared_ptr<Impl> impl_;
};

}  // namespace romr::bus
