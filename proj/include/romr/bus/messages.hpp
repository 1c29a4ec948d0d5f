#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "romr/core/error.hpp"
#include "romr/core/geometry.hpp"
#include "romr/core/occupancy_grid.hpp"
#include "romr/core/sensor_types.hpp"

namespace romr::bus {

enum class BusErrorCode {
  UnknownTopic,
  SchemaMismatch,
  ChecksumMismatch,
  TruncatedFrame,
  UnknownTopicId,
  DuplicateTopic,
  PayloadTooLarge,
  Io,
  Protocol,
};

using BusError = CodedError<BusErrorCode>;

using Bytes = std::vector<std::uint8_t>;

struct OdometryMsg {
  Pose2D pose;
  Twist2D twist;
  bool operator==(const OdometryMsg&) const = default;
};

/// Occupancy in percent per cell (0 free .. 100 occupied, -1 unknown), rows
/// bottom-up like the grid.
struct MapMsg {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  double resolution = 0.05;
  Pose2D origin;
  std::vector<std::int8_t> data;
  bool operator==(const MapMsg&) const = default;
};

struct PoseEstimateMsg {
  Pose2D pose;
  std::array<double, 9> covariance{};  // row-major x, y, theta
  bool operator==(const PoseEstimateMsg&) const = default;
};

/// The single odom -> base transform.
struct TransformMsg {
  std::string parent = "odom";
  std::string child = "base_link";
  Pose2D pose;
  bool operator==(const TransformMsg&) const = default;
};

struct StabilityMsg {
  double v = 0.0;
  double omega = 0.0;
  double lateral_accel = 0.0;
  bool tipping = false;
  bool sliding = false;
  bool operator==(const StabilityMsg&) const = default;
};

/// Alternative order fixes the schema tags: tag = index + 1.
using Payload = std::variant<Twist2D, OdometryMsg, LaserScan, ImuSample, MapMsg, PoseEstimateMsg,
                             TransformMsg, StabilityMsg>;

enum class Schema : std::uint8_t {
  Twist = 1,
  Odometry,
  LaserScan,
  Imu,
  Map,
  PoseEstimate,
  Transform,
  Stability,
};

Schema schema_of(const Payload& p);
const char* schema_name(Schema s);

struct TopicMessage {
  std::string topic;
  double stamp = 0.0;
  Payload payload;
  bool operator==(const TopicMessage&) const = default;
};

/// Tag byte, stamp, then the body; little-endian throughout.
Bytes encode_payload(double stamp, const Payload& p);

struct DecodedPayload {
  double stamp = 0.0;
  Payload payload;
};

/// Throws SchemaMismatch when the tag differs from `expected` or the body
/// does not parse to exactly the given length.
DecodedPayload decode_payload(std::span<const std::uint8_t> bytes, Schema expected);

MapMsg map_from_grid(const OccupancyGrid& grid);

}  // namespace romr::bus
