#include "romr/bus/frame_codec.hpp"

#include <fmt/format.h>

namespace romr::bus {

std::uint8_t frame_checksum(std::span<const std::uint8_t> bytes) {
  std::uint8_t sum = 0;
  for (std::uint8_t b : bytes) sum = static_cast<std::uint8_t>(sum + b);
  return static_cast<std::uint8_t>(-sum);
}

Bytes encode_raw_frame(const RawFrame& f) {
  if (f.payload.size() > kMaxPayload) {
    throw BusError(BusErrorCode::PayloadTooLarge,
                   fmt::format("payload of {} bytes exceeds {}", f.payload.size(), kMaxPayload));
  }
  Bytes out;
  out.reserve(kFrameOverhead + f.payload.size());
  const auto len = static_cast<std::uint16_t>(f.payload.size());
  const std::uint8_t header[6] = {kSync0,
                                  kSync1,
                                  static_cast<std::uint8_t>(f.topic_id & 0xFF),
                                  static_cast<std::uint8_t>(f.topic_id >> 8),
                                  static_cast<std::uint8_t>(len & 0xFF),
                                  static_cast<std::uint8_t>(len >> 8)};
  for (std::uint8_t b : header) out.push_back(b);
  out.insert(out.end(), f.payload.begin(), f.payload.end());
  out.push_back(frame_checksum(std::span(out).subspan(2)));
  return out;
}

RawFrame decode_raw_frame(std::span<const std::uint8_t> b) {
  if (b.size() < kFrameOverhead) {
    throw BusError(BusErrorCode::TruncatedFrame, fmt::format("{} bytes is shorter than a frame", b.size()));
  }
  if (b[0] != kSync0 || b[1] != kSync1) {
    throw BusError(BusErrorCode::TruncatedFrame, "frame does not start with the sync pattern");
  }
  const std::size_t len = b[4] | (std::size_t(b[5]) << 8);
  if (b.size() < kFrameOverhead + len) {
    throw BusError(BusErrorCode::TruncatedFrame,
                   fmt::format("frame declares {} payload bytes, {} present", len,
                               b.size() - kFrameOverhead));
  }
  if (b.size() > kFrameOverhead + len) {
    throw BusError(BusErrorCode::TruncatedFrame,
                   fmt::format("{} bytes after the frame end", b.size() - kFrameOverhead - len));
  }
  if (frame_checksum(b.subspan(2, 4 + len)) != b[6 + len]) {
    throw BusError(BusErrorCode::ChecksumMismatch, "frame checksum does not match");
  }
  RawFrame f;
  f.topic_id = static_cast<std::uint16_t>(b[2] | (b[3] << 8));
  f.payload.assign(b.begin() + 6, b.begin() + 6 + static_cast<std::ptrdiff_t>(len));
  return f;
}

Bytes encode_frame(const TopicMessage& msg, const TopicRegistry& reg) {
  const TopicInfo& info = reg.by_name(msg.topic);
  if (schema_of(msg.payload) != info.schema) {
    throw BusError(BusErrorCode::SchemaMismatch,
                   fmt::format("{} carries {}, got {}", msg.topic, schema_name(info.schema),
                               schema_name(schema_of(msg.payload))));
  }
  return encode_raw_frame({info.id, encode_payload(msg.stamp, msg.payload)});
}

TopicMessage message_from_frame(const RawFrame& f, const TopicRegistry& reg) {
  const TopicInfo& info = reg.by_id(f.topic_id);
  auto decoded = decode_payload(f.payload, info.schema);
  return {info.name, decoded.stamp, std::move(decoded.payload)};
}

TopicMessage decode_frame(std::span<const std::uint8_t> bytes, const TopicRegistry& reg) {
  return message_from_frame(decode_raw_frame(bytes), reg);
}

std::vector<DecodeEvent> FrameDecoder::feed(std::span<const std::uint8_t> bytes) {
  buf_.insert(buf_.end(), bytes.begin(), bytes.end());
  std::vector<DecodeEvent> out;
  drain(out, false);
  return out;
}

std::vector<DecodeEvent> FrameDecoder::finish() {
  std::vector<DecodeEvent> out;
  drain(out, true);
  buf_.clear();
  return out;
}

void FrameDecoder::drain(std::vector<DecodeEvent>& out, bool at_end) {
  auto reject = [&](BusErrorCode code, std::string detail) {
    out.push_back({std::nullopt, code, std::move(detail)});
    buf_.pop_front();  // skip this sync's first byte and search again
  };
  while (true) {
    while (!buf_.empty() && !(buf_[0] == kSync0 && (buf_.size() < 2 || buf_[1] == kSync1))) {
      buf_.pop_front();
    }
    if (buf_.empty()) return;
    if (buf_.size() < 6) {
      if (!at_end) return;
      if (buf_.size() < 2) {
        buf_.clear();
        return;
      }
      reject(BusErrorCode::TruncatedFrame, "stream ends inside a frame header");
      continue;
    }
    const std::size_t len = buf_[4] | (std::size_t(buf_[5]) << 8);
    const std::size_t total = kFrameOverhead + len;
    if (buf_.size() < total) {
      if (!at_end) return;
      reject(BusErrorCode::TruncatedFrame,
             fmt::format("stream ends {} bytes short of a frame", total - buf_.size()));
      continue;
    }
    std::uint8_t sum = 0;
    for (std::size_t i = 2; i < total; ++i) sum = static_cast<std::uint8_t>(sum + buf_[i]);
    if (sum != 0) {
      reject(BusErrorCode::ChecksumMismatch, "frame checksum does not match");
      continue;
    }
    RawFrame f;
    f.topic_id = static_cast<std::uint16_t>(buf_[2] | (buf_[3] << 8));
    f.payload.assign(buf_.begin() + 6, buf_.begin() + 6 + static_cast<std::ptrdiff_t>(len));
    try {
      out.push_back({message_from_frame(f, reg_), std::nullopt, {}});
    } catch (const BusError& e) {
      reject(e.code(), e.what());
      continue;
    }
    buf_.erase(buf_.begin(), buf_.begin() + static_cast<std::ptrdiff_t>(total));
  }
}

}  // namespace romr::bus
