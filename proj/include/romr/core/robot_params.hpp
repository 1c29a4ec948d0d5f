#pragma once

namespace romr {

/// Geometry and limits of the robot (ROMR defaults). Kinematics and the
/// stability model read everything from here.
struct RobotParams {
  double wheel_radius = 0.0825;  // m, drive wheel diameter 0.165 m
  double track_width = 0.29;     // m, inter-wheel distance
  double v_max = 3.33;           // m/s
  double v_stable_max = 2.5;     // m/s
  int pole_pairs = 15;
  double mass_robot = 17.1;      // kg
  double payload_max = 90.0;     // kg
  double length = 0.46;          // m
  double width = 0.34;           // m
  double height = 0.43;          // m
  double cog_height = 0.20;      // m, unloaded centre of gravity above ground

  /// Throws std::invalid_argument when an invariant is violated.
  void validate() const;
};

}  // namespace romr
