#include "romr/core/geometry.hpp"

namespace romr {

double normalize_angle(double theta) {
  double wrapped = std::remainder(theta, kTwoPi);  // [-pi, pi]
  if (wrapped <= -kPi) {
    wrapped += kTwoPi;
  }
  return wrapped;
}

Pose2D compose_pose(const Pose2D& a, const Pose2D& delta) {
  const double c = std::cos(a.theta);
  const double s = std::sin(a.theta);
  return Pose2D(a.x + c * delta.x - s * delta.y, a.y + s * delta.x + c * delta.y,
                a.theta + delta.theta);
}

Pose2D inverse_pose(const Pose2D& p) {
  const double c = std::cos(p.theta);
  const double s = std::sin(p.theta);
  return Pose2D(-c * p.x - s * p.y, s * p.x - c * p.y, -p.theta);
}

Pose2D relative_pose(const Pose2D& from, const Pose2D& to) {
  return compose_pose(inverse_pose(from), to);
}

Vec2 transform_point(const Pose2D& pose, const Vec2& local) {
  const double c = std::cos(pose.theta);
  const double s = std::sin(pose.theta);
  return {pose.x + c * local.x() - s * local.y(), pose.y + s * local.x() + c * local.y()};
}

}  // namespace romr
