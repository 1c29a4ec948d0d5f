#pragma once

#include "romr/core/geometry.hpp"
#include "romr/core/robot_params.hpp"

namespace romr::drivetrain {

/// Wheel angular velocities in rad/s, positive drives the robot forward.
struct WheelSpeeds {
  double left = 0.0;
  double right = 0.0;
  bool operator==(const WheelSpeeds&) const = default;
};

struct WheelCommand {
  WheelSpeeds speeds;
  bool clamped = false;  // |v| exceeded v_max and the twist was scaled down
};

/// Limits |v| to v_max. omega is scaled by the same factor so the commanded
/// curvature survives saturation.
Twist2D clamp_twist(const Twist2D& cmd, const RobotParams& params, bool* clamped = nullptr);

WheelCommand inverse_kinematics(const Twist2D& cmd, const RobotParams& params);

Twist2D forward_kinematics(const WheelSpeeds& w, const RobotParams& params);

}  // namespace romr::drivetrain
