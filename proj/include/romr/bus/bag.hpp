#pragma once

#include <filesystem>
#include <fstream>
#include <mutex>
#include <vector>

#include "romr/bus/frame_codec.hpp"
#include "romr/bus/topic_bus.hpp"

namespace romr::bus {

// Bag file: "ROMRBAG1", u16 topic count, per topic (u16 name length, name,
// u8 schema), then one record per message: u32 frame length, frame bytes.
// Little-endian throughout.

class BagWriter {
 public:
  BagWriter(const std::filesystem::path& path, const TopicRegistry& reg);

  void write(const TopicMessage& msg);
  void flush();
  std::size_t count() const { return count_; }

 private:
  std::ofstream out_;
  std::filesystem::path path_;
  const TopicRegistry& reg_;
  std::size_t count_ = 0;
};

struct Bag {
  TopicRegistry registry;
  std::vector<TopicMessage> messages;
};

Bag read_bag(const std::filesystem::path& path);

/// Writes every message the bus delivers, on whichever thread publishes it.
class BagRecorder {
 public:
  BagRecorder(TopicBus& bus, const std::filesystem::path& path);
  ~BagRecorder();
  BagRecorder(const BagRecorder&) = delete;
  BagRecorder& operator=(const BagRecorder&) = delete;

  std::size_t count() const;
  void flush();

 private:
  TopicBus& bus_;
  BagWriter writer_;
  mutable std::mutex mu_;
  SubscriptionId sub_;
};

struct ReplayOptions {
  bool as_fast_as_possible = false;
  double rate = 1.0;  // playback speed factor when pacing
};

/// Re-publishes in file order; paced by stamp differences unless told not
/// to. The bus must carry every bag topic with the same schema.
std::size_t replay(const Bag& bag, TopicBus& bus, const ReplayOptions& opts = {});

}  // namespace romr::bus
