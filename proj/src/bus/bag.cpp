#include "romr/bus/bag.hpp"

#include <chrono>
#include <iterator>
#include <thread>

#include <fmt/format.h>

namespace romr::bus {

namespace {

constexpr char kMagic[8] = {'R', 'O', 'M', 'R', 'B', 'A', 'G', '1'};

void put_u16(std::ostream& o, std::uint16_t v) {
  const char b[2] = {static_cast<char>(v & 0xFF), static_cast<char>(v >> 8)};
  o.write(b, 2);
}

void put_u32(std::ostream& o, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  o.write(b, 4);
}

class ByteCursor {
 public:
  ByteCursor(const Bytes& data, std::string name) : d_(data), name_(std::move(name)) {}

  bool at_end() const { return pos_ == d_.size(); }
  std::uint8_t u8() {
    need(1);
    return d_[pos_++];
  }
  std::uint16_t u16() {
    need(2);
    const auto v = static_cast<std::uint16_t>(d_[pos_] | (d_[pos_ + 1] << 8));
    pos_ += 2;
    return v;
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t(d_[pos_ + i]) << (8 * i);
    pos_ += 4;
    return v;
  }
  std::span<const std::uint8_t> take(std::size_t n) {
    need(n);
    auto s = std::span(d_).subspan(pos_, n);
    pos_ += n;
    return s;
  }

 private:
  void need(std::size_t n) const {
    if (d_.size() - pos_ < n) {
      throw BusError(BusErrorCode::TruncatedFrame,
                     fmt::format("{}: truncated at byte {}", name_, pos_));
    }
  }
  const Bytes& d_;
  std::string name_;
  std::size_t pos_ = 0;
};

}  // namespace

BagWriter::BagWriter(const std::filesystem::path& path, const TopicRegistry& reg)
    : out_(path, std::ios::binary | std::ios::trunc), path_(path), reg_(reg) {
  if (!out_) throw BusError(BusErrorCode::Io, "cannot write " + path.string());
  out_.write(kMagic, sizeof kMagic);
  put_u16(out_, static_cast<std::uint16_t>(reg.topics().size()));
  for (const TopicInfo& t : reg.topics()) {
    put_u16(out_, static_cast<std::uint16_t>(t.name.size()));
    out_.write(t.name.data(), static_cast<std::streamsize>(t.name.size()));
    out_.put(static_cast<char>(t.schema));
  }
}

void BagWriter::write(const TopicMessage& msg) {
  const Bytes frame = encode_frame(msg, reg_);
  put_u32(out_, static_cast<std::uint32_t>(frame.size()));
  out_.write(reinterpret_cast<const char*>(frame.data()), static_cast<std::streamsize>(frame.size()));
  if (!out_) throw BusError(BusErrorCode::Io, "write failed: " + path_.string());
  ++count_;
}

void BagWriter::flush() {
  if (!out_.flush()) throw BusError(BusErrorCode::Io, "write failed: " + path_.string());
}

Bag read_bag(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw BusError(BusErrorCode::Io, "cannot open " + path.string());
  const Bytes data{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  const std::string name = path.string();
  ByteCursor c(data, name);
  const auto magic = c.take(sizeof kMagic);
  if (!std::equal(magic.begin(), magic.end(), kMagic)) {
    throw BusError(BusErrorCode::Protocol, name + ": not a bag file");
  }
  Bag bag;
  const std::uint16_t n_topics = c.u16();
  for (std::uint16_t i = 0; i < n_topics; ++i) {
    const auto topic = c.take(c.u16());
    const std::uint8_t schema = c.u8();
    if (schema < 1 || schema > static_cast<std::uint8_t>(Schema::Stability)) {
      throw BusError(BusErrorCode::SchemaMismatch, fmt::format("{}: unknown schema tag {}", name, schema));
    }
    bag.registry.add(std::string(topic.begin(), topic.end()), static_cast<Schema>(schema));
  }
  while (!c.at_end()) {
    const auto frame = c.take(c.u32());
    bag.messages.push_back(decode_frame(frame, bag.registry));
  }
  return bag;
}

BagRecorder::BagRecorder(TopicBus& bus, const std::filesystem::path& path)
    : bus_(bus), writer_(path, bus.registry()) {
  sub_ = bus_.subscribe_all([this](const TopicMessage& m) {
    std::lock_guard lock(mu_);
    writer_.write(m);
  });
}

BagRecorder::~BagRecorder() {
  bus_.unsubscribe(sub_);
  std::lock_guard lock(mu_);
  try {
    writer_.flush();
  } catch (const BusError&) {
  }
}

std::size_t BagRecorder::count() const {
  std::lock_guard lock(mu_);
  return writer_.count();
}

void BagRecorder::flush() {
  std::lock_guard lock(mu_);
  writer_.flush();
}

std::size_t replay(const Bag& bag, TopicBus& bus, const ReplayOptions& opts) {
  for (const TopicInfo& t : bag.registry.topics()) {
    const TopicInfo& mine = bus.registry().by_name(t.name);
    if (mine.schema != t.schema) {
      throw BusError(BusErrorCode::SchemaMismatch,
                     fmt::format("bag topic {} is {}, bus has {}", t.name, schema_name(t.schema),
                                 schema_name(mine.schema)));
    }
  }
  if (bag.messages.empty()) return 0;
  const auto t0 = std::chrono::steady_clock::now();
  const double first = bag.messages.front().stamp;
  for (const TopicMessage& m : bag.messages) {
    if (!opts.as_fast_as_possible && opts.rate > 0) {
      const double offset = (m.stamp - first) / opts.rate;
      if (offset > 0) {
        std::this_thread::sleep_until(t0 + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                               std::chrono::duration<double>(offset)));
      }
    }
    bus.publish(m);
  }
  return bag.messages.size();
}

}  // namespace romr::bus
