#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "romr/core/geometry.hpp"

namespace romr {

inline constexpr double kNoReturn = std::numeric_limits<double>::infinity();

/// One lidar sweep. Beams without a return hold +infinity, never range_max.
struct LaserScan {
  double angle_min = -kPi;
  double angle_max = kPi - deg_to_rad(1.0);
  double angle_increment = deg_to_rad(1.0);
  double range_min = 0.15;
  double range_max = 16.0;
  std::vector<double> ranges;
  double stamp = 0.0;

  /// Beam count implied by the angular metadata.
  std::size_t expected_size() const {
    return static_cast<std::size_t>(
               std::lround((angle_max - angle_min) / angle_increment)) +
           1;
  }
  double beam_angle(std::size_t i) const {
    return angle_min + static_cast<double>(i) * angle_increment;
  }
  bool is_valid_return(double r) const {
    return std::isfinite(r) && r >= range_min && r <= range_max;
  }
  /// Throws std::invalid_argument when ranges disagree with the metadata.
  void validate() const;

  bool operator==(const LaserScan&) const = default;
};

/// Builds an all-no-return scan with `beams` equally spaced over 360 degrees.
LaserScan make_full_circle_scan(std::size_t beams = 360, double range_min = 0.15,
                                double range_max = 16.0);

struct ImuSample {
  Vec3 accel = Vec3::Zero();  // m/s^2, specific force in sensor frame
  Vec3 gyro = Vec3::Zero();   // rad/s
  double stamp = 0.0;

  bool is_finite() const { return accel.allFinite() && gyro.allFinite(); }
  bool operator==(const ImuSample& o) const {
    return accel == o.accel && gyro == o.gyro && stamp == o.stamp;
  }
};

}  // namespace romr
