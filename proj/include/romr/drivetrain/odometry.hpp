#pragma once

#include "romr/core/geometry.hpp"
#include "romr/core/robot_params.hpp"

namespace romr::drivetrain {

/// Wheel travel per hall tick in metres.
double arc_per_tick(const RobotParams& params);

/// Exact-arc unicycle update from integer tick increments of each wheel.
Pose2D integrate_odometry(const Pose2D& pose, long long dticks_left,
                          long long dticks_right, const RobotParams& params);

/// Exact-arc update from wheel travel distances (m).
Pose2D integrate_arc(const Pose2D& pose, double ds_left, double ds_right,
                     double track_width);

/// Accumulates absolute tick counters into a pose.
class TickOdometry {
 public:
  explicit TickOdometry(RobotParams params, Pose2D start = {})
      : params_(params), pose_(start) {}

  /// Feeds absolute counter readings; the first call only latches them.
  const Pose2D& update(long long ticks_left, long long ticks_right);

  const Pose2D& pose() const { return pose_; }
  void reset(const Pose2D& pose) {
    pose_ = pose;
    primed_ = false;
  }

 private:
  RobotParams params_;
  Pose2D pose_;
  long long last_left_ = 0;
  long long last_right_ = 0;
  bool primed_ = false;
};

}  // namespace romr::drivetrain
