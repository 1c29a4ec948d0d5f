#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "romr/bus/messages.hpp"
#include "romr/bus/topic_bus.hpp"

namespace romr::bus {

inline constexpr std::uint8_t kSync0 = 0xFF;
inline constexpr std::uint8_t kSync1 = 0xFE;
inline constexpr std::size_t kFrameOverhead = 7;  // sync 2, id 2, length 2, checksum 1
inline constexpr std::size_t kMaxPayload = 0xFFFF;

struct RawFrame {
  std::uint16_t topic_id = 0;
  Bytes payload;
  bool operator==(const RawFrame&) const = default;
};

/// Two's complement of the byte sum, so id + length + payload + checksum == 0 mod 256.
std::uint8_t frame_checksum(std::span<const std::uint8_t> id_len_payload);

Bytes encode_raw_frame(const RawFrame& f);  // throws PayloadTooLarge

/// Decodes exactly one frame occupying all of `bytes`.
RawFrame decode_raw_frame(std::span<const std::uint8_t> bytes);

Bytes encode_frame(const TopicMessage& msg, const TopicRegistry& reg);
TopicMessage decode_frame(std::span<const std::uint8_t> bytes, const TopicRegistry& reg);

/// Message from an already validated raw frame.
TopicMessage message_from_frame(const RawFrame& f, const TopicRegistry& reg);

struct DecodeEvent {
  std::optional<TopicMessage> message;
  std::optional<BusErrorCode> error;
  std::string detail;
};

/// Streaming decoder for a byte link. After any bad candidate frame it
/// drops one byte past the sync pattern and searches again, so frames that
/// start inside discarded garbage are still found.
class FrameDecoder {
 public:
  explicit FrameDecoder(const TopicRegistry& reg) : reg_(reg) {}

  std::vector<DecodeEvent> feed(std::span<const std::uint8_t> bytes);
  /// End of stream: an incomplete trailing candidate is reported as
  /// TruncatedFrame and the bytes after its sync are searched once more.
  std::vector<DecodeEvent> finish();

  std::size_t buffered() const { return buf_.size(); }

 private:
  void drain(std::vector<DecodeEvent>& out, bool at_end);

  const TopicRegistry& reg_;
  std::deque<std::uint8_t> buf_;
};

}  // namespace romr::bus
