#pragma once

#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <string>
#include <vector>

#include "romr/bus/bag.hpp"
#include "romr/bus/frame_codec.hpp"

namespace romr::testsupport {

// Random but schema-valid payloads: finite numbers with awkward values mixed
// in, thetas in (-pi, pi], scans may hold no-return beams.
class MessageGen {
 public:
  explicit MessageGen(std::uint64_t seed) : rng_(seed) {}

  double any() {
    switch (pick(12)) {
      case 0: return 0.0;
      case 1: return -0.0;
      case 2: return std::numeric_limits<double>::denorm_min();
      case 3: return std::numeric_limits<double>::max();
      case 4: return -std::numeric_limits<double>::lowest() / 3;
      default: return std::uniform_real_distribution<double>(-1e3, 1e3)(rng_);
    }
  }
  double angle() {
    if (pick(20) == 0) return kPi;
    return normalize_angle(std::uniform_real_distribution<double>(-kPi, kPi)(rng_));
  }
  Pose2D pose() {
    Pose2D p;
    p.x = any();
    p.y = any();
    p.theta = angle();
    return p;
  }
  std::string text() {
    std::string s(pick(21), ' ');
    for (auto& c : s) c = static_cast<char>(pick(256));
    return s;
  }

  bus::Payload payload(bus::Schema s) {
    using namespace bus;
    switch (s) {
      case Schema::Twist: return Twist2D{any(), any()};
      case Schema::Odometry: return OdometryMsg{pose(), {any(), any()}};
      case Schema::LaserScan: {
        LaserScan scan;
        scan.angle_min = any();
        scan.angle_max = any();
        scan.angle_increment = any();
        scan.range_min = any();
        scan.range_max = any();
        scan.stamp = any();
        scan.ranges.resize(pick(721));
        for (auto& r : scan.ranges) r = pick(4) == 0 ? kNoReturn : any();
        return scan;
      }
      case Schema::Imu: {
        ImuSample m;
        m.accel = Vec3(any(), any(), any());
        m.gyro = Vec3(any(), any(), any());
        m.stamp = any();
        return m;
      }
      case Schema::Map: {
        MapMsg m;
        m.width = static_cast<std::uint32_t>(pick(60));
        m.height = static_cast<std::uint32_t>(pick(60));
        m.resolution = any();
        m.origin = pose();
        m.data.resize(std::size_t(m.width) * m.height);
        for (auto& c : m.data) c = static_cast<std::int8_t>(static_cast<int>(pick(102)) - 1);
        return m;
      }
      case Schema::PoseEstimate: {
        PoseEstimateMsg m;
        m.pose = pose();
        for (auto& c : m.covariance) c = any();
        return m;
      }
      case Schema::Transform: return TransformMsg{text(), text(), pose()};
      case Schema::Stability: return StabilityMsg{any(), any(), any(), pick(2) == 1, pick(2) == 1};
    }
    return Twist2D{};
  }

  bus::TopicMessage message(const bus::TopicRegistry& reg) {
    const auto& t = reg.topics()[pick(reg.topics().size())];
    return {t.name, any(), payload(t.schema)};
  }

  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  std::mt19937_64& rng() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

struct CheckResult {
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::string first_failure;
  bool ok() const { return cases > 0 && failures == 0; }
};

// decode(encode(m)) == m, and re-encoding gives the same bytes (covers -0.0).
inline CheckResult frame_roundtrip_check(std::size_t n, std::uint64_t seed) {
  const auto reg = bus::standard_registry();
  MessageGen gen(seed);
  CheckResult r;
  for (std::size_t i = 0; i < n; ++i, ++r.cases) {
    const bus::TopicMessage m = gen.message(reg);
    try {
      const bus::Bytes bytes = bus::encode_frame(m, reg);
      const bus::TopicMessage back = bus::decode_frame(bytes, reg);
      if (!(back == m) || bus::encode_frame(back, reg) != bytes) {
        if (!r.failures++) r.first_failure = "case " + std::to_string(i) + " on " + m.topic;
      }
    } catch (const std::exception& e) {
      if (!r.failures++) r.first_failure = "case " + std::to_string(i) + ": " + e.what();
    }
  }
  return r;
}

// Streams of valid frames with up to 8 garbage bytes between them (often
// containing sync patterns and plausible headers), fed in random chunks.
// Every real frame must come out, in order.
inline CheckResult resync_check(std::size_t trials, std::uint64_t seed) {
  const auto reg = bus::standard_registry();
  MessageGen gen(seed);
  CheckResult r;
  for (std::size_t t = 0; t < trials; ++t, ++r.cases) {
    std::vector<bus::TopicMessage> sent;
    bus::Bytes stream;
    const std::size_t frames = 1 + gen.pick(12);
    for (std::size_t k = 0; k < frames; ++k) {
      const std::size_t junk = gen.pick(9);
      for (std::size_t j = 0; j < junk; ++j) {
        const auto mode = gen.pick(4);
        if (mode == 0 && j + 1 < junk) {
          stream.push_back(bus::kSync0);
          stream.push_back(bus::kSync1);
          ++j;
        } else if (mode == 1) {
          stream.push_back(bus::kSync0);
        } else {
          stream.push_back(static_cast<std::uint8_t>(gen.pick(256)));
        }
      }
      sent.push_back(gen.message(reg));
      const auto f = bus::encode_frame(sent.back(), reg);
      stream.insert(stream.end(), f.begin(), f.end());
    }
    const std::size_t tail = gen.pick(9);
    for (std::size_t j = 0; j < tail; ++j) stream.push_back(j == 0 ? bus::kSync0 : static_cast<std::uint8_t>(gen.pick(256)));

    bus::FrameDecoder dec(reg);
    std::vector<bus::TopicMessage> got;
    std::size_t pos = 0;
    while (pos < stream.size()) {
      const std::size_t chunk = std::min(stream.size() - pos, 1 + gen.pick(300));
      for (auto& e : dec.feed(std::span(stream).subspan(pos, chunk))) {
        if (e.message) got.push_back(*e.message);
      }
      pos += chunk;
    }
    for (auto& e : dec.finish()) {
      if (e.message) got.push_back(*e.message);
    }
    if (got != sent && !r.failures++) {
      r.first_failure = "trial " + std::to_string(t) + ": sent " + std::to_string(sent.size()) +
                        " frames, decoded " + std::to_string(got.size());
    }
  }
  return r;
}

inline std::vector<char> file_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Record n random messages, replay the bag into a fresh bus while recording
// again, and compare the two files byte for byte.
inline CheckResult bag_identity_check(const std::filesystem::path& dir, std::size_t n,
                                      std::uint64_t seed) {
  CheckResult r;
  r.cases = 1;
  const auto first = dir / "first.bag";
  const auto second = dir / "second.bag";
  MessageGen gen(seed);
  {
    bus::TopicBus bus;
    bus::BagRecorder rec(bus, first);
    double stamp = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      auto m = gen.message(bus.registry());
      stamp += 0.001 * double(gen.pick(10));
      m.stamp = stamp;
      bus.publish(m);
    }
  }
  const bus::Bag bag = bus::read_bag(first);
  {
    bus::TopicBus bus(bag.registry);
    bus::BagRecorder rec(bus, second);
    bus::replay(bag, bus, {.as_fast_as_possible = true});
  }
  const auto a = file_bytes(first), b = file_bytes(second);
  if (bag.messages.size() != n) {
    r.failures = 1;
    r.first_failure = "bag holds " + std::to_string(bag.messages.size()) + " of " + std::to_string(n);
  } else if (a != b) {
    r.failures = 1;
    r.first_failure = "replayed recording differs (" + std::to_string(a.size()) + " vs " +
                      std::to_string(b.size()) + " bytes)";
  }
  return r;
}

}  // namespace romr::testsupport
