#include "romr/bus/messages.hpp"

#include <bit>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace romr::bus {

namespace {

class Writer {
 public:
  explicit Writer(Bytes& out) : out_(out) {}

  void u8(std::uint8_t v) { out_.push_back(v); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64(double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) out_.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
  }
  void str(const std::string& s) {
    u32(static_cast<std::uint32_t>(s.size()));
    out_.insert(out_.end(), s.begin(), s.end());
  }
  void pose(const Pose2D& p) {
    f64(p.x);
    f64(p.y);
    f64(p.theta);
  }

 private:
  Bytes& out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

  std::uint8_t u8() {
    need(1);
    return in_[pos_++];
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t(in_[pos_++]) << (8 * i);
    return v;
  }
  double f64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(in_[pos_++]) << (8 * i);
    return std::bit_cast<double>(v);
  }
  std::string str() {
    const std::uint32_t n = u32();
    need(n);
    std::string s(in_.begin() + static_cast<std::ptrdiff_t>(pos_),
                  in_.begin() + static_cast<std::ptrdiff_t>(pos_ + n));
    pos_ += n;
    return s;
  }
  // Fields are copied verbatim; the constructor would re-wrap theta.
  Pose2D pose() {
    Pose2D p;
    p.x = f64();
    p.y = f64();
    p.theta = f64();
    return p;
  }
  bool flag() {
    const std::uint8_t b = u8();
    if (b > 1) fail("flag byte is not 0/1");
    return b == 1;
  }
  std::size_t remaining() const { return in_.size() - pos_; }
  [[noreturn]] void fail(const std::string& why) const {
    throw BusError(BusErrorCode::SchemaMismatch, fmt::format("payload byte {}: {}", pos_, why));
  }

 private:
  void need(std::size_t n) const {
    if (in_.size() - pos_ < n) fail("body ends early");
  }
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

struct BodyWriter {
  Writer& w;
  void operator()(const Twist2D& t) {
    w.f64(t.v);
    w.f64(t.omega);
  }
  void operator()(const OdometryMsg& m) {
    w.pose(m.pose);
    w.f64(m.twist.v);
    w.f64(m.twist.omega);
  }
  void operator()(const LaserScan& s) {
    w.f64(s.angle_min);
    w.f64(s.angle_max);
    w.f64(s.angle_increment);
    w.f64(s.range_min);
    w.f64(s.range_max);
    w.f64(s.stamp);
    w.u32(static_cast<std::uint32_t>(s.ranges.size()));
    for (double r : s.ranges) w.f64(r);
  }
  void operator()(const ImuSample& s) {
    for (int i = 0; i < 3; ++i) w.f64(s.accel[i]);
    for (int i = 0; i < 3; ++i) w.f64(s.gyro[i]);
    w.f64(s.stamp);
  }
  void operator()(const MapMsg& m) {
    w.u32(m.width);
    w.u32(m.height);
    w.f64(m.resolution);
    w.pose(m.origin);
    w.u32(static_cast<std::uint32_t>(m.data.size()));
    for (std::int8_t c : m.data) w.u8(static_cast<std::uint8_t>(c));
  }
  void operator()(const PoseEstimateMsg& m) {
    w.pose(m.pose);
    for (double c : m.covariance) w.f64(c);
  }
  void operator()(const TransformMsg& m) {
    w.str(m.parent);
    w.str(m.child);
    w.pose(m.pose);
  }
  void operator()(const StabilityMsg& m) {
    w.f64(m.v);
    w.f64(m.omega);
    w.f64(m.lateral_accel);
    w.u8(m.tipping ? 1 : 0);
    w.u8(m.sliding ? 1 : 0);
  }
};

Payload read_body(Reader& r, Schema s) {
  switch (s) {
    case Schema::Twist: {
      Twist2D t;
      t.v = r.f64();
      t.omega = r.f64();
      return t;
    }
    case Schema::Odometry: {
      OdometryMsg m;
      m.pose = r.pose();
      m.twist.v = r.f64();
      m.twist.omega = r.f64();
      return m;
    }
    case Schema::LaserScan: {
      LaserScan s2;
      s2.angle_min = r.f64();
      s2.angle_max = r.f64();
      s2.angle_increment = r.f64();
      s2.range_min = r.f64();
      s2.range_max = r.f64();
      s2.stamp = r.f64();
      const std::uint32_t n = r.u32();
      if (n > r.remaining() / 8) r.fail("range count exceeds body");
      s2.ranges.resize(n);
      for (auto& v : s2.ranges) v = r.f64();
      return s2;
    }
    case Schema::Imu: {
      ImuSample m;
      for (int i = 0; i < 3; ++i) m.accel[i] = r.f64();
      for (int i = 0; i < 3; ++i) m.gyro[i] = r.f64();
      m.stamp = r.f64();
      return m;
    }
    case Schema::Map: {
      MapMsg m;
      m.width = r.u32();
      m.height = r.u32();
      m.resolution = r.f64();
      m.origin = r.pose();
      const std::uint32_t n = r.u32();
      if (n > r.remaining()) r.fail("cell count exceeds body");
      if (std::uint64_t(m.width) * m.height != n) r.fail("cell count disagrees with size");
      m.data.resize(n);
      for (auto& c : m.data) c = static_cast<std::int8_t>(r.u8());
      return m;
    }
    case Schema::PoseEstimate: {
      PoseEstimateMsg m;
      m.pose = r.pose();
      for (auto& c : m.covariance) c = r.f64();
      return m;
    }
    case Schema::Transform: {
      TransformMsg m;
      m.parent = r.str();
      m.child = r.str();
      m.pose = r.pose();
      return m;
    }
    case Schema::Stability: {
      StabilityMsg m;
      m.v = r.f64();
      m.omega = r.f64();
      m.lateral_accel = r.f64();
      m.tipping = r.flag();
      m.sliding = r.flag();
      return m;
    }
  }
  r.fail("unknown schema tag");
}

}  // namespace

Schema schema_of(const Payload& p) { return static_cast<Schema>(p.index() + 1); }

const char* schema_name(Schema s) {
  switch (s) {
    case Schema::Twist: return "Twist";
    case Schema::Odometry: return "Odometry";
    case Schema::LaserScan: return "LaserScan";
    case Schema::Imu: return "Imu";
    case Schema::Map: return "Map";
    case Schema::PoseEstimate: return "PoseEstimate";
    case Schema::Transform: return "Transform";
    case Schema::Stability: return "Stability";
  }
  return "?";
}

Bytes encode_payload(double stamp, const Payload& p) {
  Bytes out;
  Writer w(out);
  w.u8(static_cast<std::uint8_t>(schema_of(p)));
  w.f64(stamp);
  std::visit(BodyWriter{w}, p);
  return out;
}

DecodedPayload decode_payload(std::span<const std::uint8_t> bytes, Schema expected) {
  Reader r(bytes);
  const std::uint8_t tag = r.u8();
  if (tag != static_cast<std::uint8_t>(expected)) {
    throw BusError(BusErrorCode::SchemaMismatch,
                   fmt::format("schema tag {} where {} ({}) was expected", tag,
                               static_cast<int>(expected), schema_name(expected)));
  }
  DecodedPayload out;
  out.stamp = r.f64();
  out.payload = read_body(r, expected);
  if (r.remaining() != 0) r.fail(fmt::format("{} trailing bytes", r.remaining()));
  return out;
}

MapMsg map_from_grid(const OccupancyGrid& grid) {
  MapMsg m;
  m.width = static_cast<std::uint32_t>(grid.width());
  m.height = static_cast<std::uint32_t>(grid.height());
  m.resolution = grid.resolution();
  m.origin = grid.origin();
  m.data.reserve(m.width * m.height);
  for (int y = 0; y < grid.height(); ++y) {
    for (int x = 0; x < grid.width(); ++x) {
      if (grid.log_odds(x, y) == 0.0) {
        m.data.push_back(-1);
      } else {
        m.data.push_back(static_cast<std::int8_t>(std::lround(100.0 * grid.probability(x, y))));
      }
    }
  }
  return m;
}

}  // namespace romr::bus
