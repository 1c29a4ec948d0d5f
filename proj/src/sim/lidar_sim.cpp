#include "romr/sim/lidar_sim.hpp"

#include <algorithm>
#include <cmath>

namespace romr::sim {

std::optional<double> ray_cast(const Vec2& origin, double angle, const WorldMap& world) {
  const Vec2 dir(std::cos(angle), std::sin(angle));
  std::optional<double> best;
  for (const auto& s : world.segments) {
    const Vec2 e = s.b - s.a;
    const double denom = dir.x() * e.y() - dir.y() * e.x();
    if (std::abs(denom) < 1e-15) continue;  // parallel
    const Vec2 w = s.a - origin;
    const double t = (w.x() * e.y() - w.y() * e.x()) / denom;
    const double u = (w.x() * dir.y() - w.y() * dir.x()) / denom;
    if (t < 0.0 || u < 0.0 || u > 1.0) continue;
    if (!best || t < *best) best = t;
  }
  return best;
}

LaserScan simulate_lidar(const Pose2D& pose, const WorldMap& world, const LidarSpec& spec,
                         std::mt19937_64& rng) {
  if (!world.bounds.contains(pose.translation())) {
    throw LidarError(LidarErrorCode::PoseOutsideWorld, "lidar pose outside world bounds");
  }
  LaserScan scan = make_full_circle_scan(spec.beams, spec.range_min, spec.range_max);
  std::normal_distribution<double> noise(0.0, spec.range_sigma);
  for (std::size_t i = 0; i < scan.ranges.size(); ++i) {
    const auto hit = ray_cast(pose.translation(), pose.theta + scan.beam_angle(i), world);
    if (!hit || *hit > spec.range_max || *hit < spec.range_min) continue;
    const double noisy = *hit + (spec.range_sigma > 0 ? noise(rng) : 0.0);
    scan.ranges[i] = std::clamp(noisy, spec.range_min, spec.range_max);
  }
  return scan;
}

}  // namespace romr::sim
