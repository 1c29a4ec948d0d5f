#include "romr/drivetrain/kinematics.hpp"

#include <cmath>

namespace romr::drivetrain {

Twist2D clamp_twist(const Twist2D& cmd, const RobotParams& params, bool* clamped) {
  Twist2D out = cmd;
  const bool over = std::abs(cmd.v) > params.v_max;
  if (over) {
    const double scale = params.v_max / std::abs(cmd.v);
    out.v = std::copysign(params.v_max, cmd.v);
    out.omega = cmd.omega * scale;
  }
  if (clamped != nullptr) *clamped = over;
  return out;
}

WheelCommand inverse_kinematics(const Twist2D& cmd, const RobotParams& params) {
  WheelCommand out;
  const Twist2D t = clamp_twist(cmd, params, &out.clamped);
  const double half_track = params.track_width / 2.0;
  out.speeds.left = (t.v - t.omega * half_track) / params.wheel_radius;
  out.speeds.right = (t.v + t.omega * half_track) / params.wheel_radius;
  return out;
}

Twist2D forward_kinematics(const WheelSpeeds& w, const RobotParams& params) {
  return {params.wheel_radius * (w.left + w.right) / 2.0,
          params.wheel_radius * (w.right - w.left) / params.track_width};
}

}  // namespace romr::drivetrain
