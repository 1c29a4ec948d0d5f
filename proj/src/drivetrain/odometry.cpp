#include "romr/drivetrain/odometry.hpp"

#include <cmath>

#include "romr/drivetrain/hall.hpp"

namespace romr::drivetrain {

namespace {
constexpr double kStraightThreshold = 1e-9;
}

double arc_per_tick(const RobotParams& params) {
  return kTwoPi * params.wheel_radius / ticks_per_revolution(params);
}

Pose2D integrate_arc(const Pose2D& pose, double ds_left, double ds_right,
                     double track_width) {
  const double ds = 0.5 * (ds_left + ds_right);
  const double dtheta = (ds_right - ds_left) / track_width;
  if (std::abs(dtheta) < kStraightThreshold) {
    const double heading = pose.theta + 0.5 * dtheta;
    return Pose2D(pose.x + ds * std::cos(heading), pose.y + ds * std::sin(heading),
                  pose.theta + dtheta);
  }
  const double radius = ds / dtheta;
  const double end = pose.theta + dtheta;
  return Pose2D(pose.x + radius * (std::sin(end) - std::sin(pose.theta)),
                pose.y - radius * (std::cos(end) - std::cos(pose.theta)), end);
}

Pose2D integrate_odometry(const Pose2D& pose, long long dticks_left,
                          long long dticks_right, const RobotParams& params) {
  const double arc = arc_per_tick(params);
  return integrate_arc(pose, arc * static_cast<double>(dticks_left),
                       arc * static_cast<double>(dticks_right), params.track_width);
}

const Pose2D& TickOdometry::update(long long ticks_left, long long ticks_right) {
  if (primed_) {
    pose_ = integrate_odometry(pose_, ticks_left - last_left_, ticks_right - last_right_,
                               params_);
  }
  last_left_ = ticks_left;
  last_right_ = ticks_right;
  primed_ = true;
  return pose_;
}

}  // namespace romr::drivetrain
