#pragma once

#include <cmath>
#include <numbers>

#include <Eigen/Core>

namespace romr {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kGravity = 9.81;

constexpr double deg_to_rad(double deg) { return deg * (kPi / 180.0); }
constexpr double rad_to_deg(double rad) { return rad * (180.0 / kPi); }

/// Wraps an angle into (-pi, pi].
double normalize_angle(double theta);

/// Smallest signed difference a - b, wrapped into (-pi, pi].
inline double angle_diff(double a, double b) { return normalize_angle(a - b); }

/// Planar pose of a body frame expressed in a parent frame.
struct Pose2D {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;  // always kept in (-pi, pi]

  Pose2D() = default;
  Pose2D(double x_, double y_, double theta_)
      : x(x_), y(y_), theta(normalize_angle(theta_)) {}

  Vec2 translation() const { return {x, y}; }
  bool is_finite() const {
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(theta);
  }
  bool operator==(const Pose2D&) const = default;
};

/// Body-frame velocity command. omega is positive counter-clockwise.
struct Twist2D {
  double v = 0.0;
  double omega = 0.0;

  bool is_finite() const { return std::isfinite(v) && std::isfinite(omega); }
  bool operator==(const Twist2D&) const = default;
};

/// a (+) delta, with delta expressed in a's frame.
Pose2D compose_pose(const Pose2D& a, const Pose2D& delta);

Pose2D inverse_pose(const Pose2D& p);

/// Relative pose of `to` seen from `from`: inverse(from) (+) to.
Pose2D relative_pose(const Pose2D& from, const Pose2D& to);

/// Maps a point from the pose's body frame into the parent frame.
Vec2 transform_point(const Pose2D& pose, const Vec2& local);

}  // namespace romr
