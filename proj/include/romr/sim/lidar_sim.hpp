#pragma once

#include <cstddef>
#include <optional>
#include <random>

#include "romr/core/error.hpp"
#include "romr/core/sensor_types.hpp"
#include "romr/sim/world_map.hpp"

namespace romr::sim {

/// RPlidar A2 class sensor. Range minimum is a device convention.
struct LidarSpec {
  std::size_t beams = 360;
  double range_min = 0.15;
  double range_max = 16.0;
  double range_sigma = 0.01;  // m, Gaussian range noise on finite returns
  double rate_hz = 10.0;
};

enum class LidarErrorCode { PoseOutsideWorld };
using LidarError = CodedError<LidarErrorCode>;

/// Distance along the ray to the nearest segment, nullopt when nothing is hit.
std::optional<double> ray_cast(const Vec2& origin, double angle, const WorldMap& world);

/// Casts every beam from the pose. Returns beyond range_max or below
/// range_min report +infinity; finite returns get N(0, sigma) noise and stay
/// inside [range_min, range_max].
LaserScan simulate_lidar(const Pose2D& pose, const WorldMap& world, const LidarSpec& spec,
                         std::mt19937_64& rng);

}  // namespace romr::sim
