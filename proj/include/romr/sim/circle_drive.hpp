#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "romr/core/geometry.hpp"
#include "romr/core/robot_params.hpp"
#include "romr/sim/stability.hpp"

namespace romr::sim {

/// One recorded sample of a stability run (odometry pose, command, IMU).
struct StabilityRow {
  double t = 0.0;
  Pose2D odom;
  double v_cmd = 0.0;
  double omega_cmd = 0.0;
  double ax = 0.0;
  double ay = 0.0;
  double gz = 0.0;
  std::string flag;
};

struct CircleRun {
  std::vector<Pose2D> trajectory;  // tick odometry, one per step
  std::vector<Pose2D> truth;
  std::vector<StabilityRow> rows;
  bool ever_unstable = false;
  std::optional<double> first_unstable_time;
  StabilityAssessment worst;  // assessment with the largest lateral acceleration
};

struct CircleOptions {
  double dt = 0.01;  // s
};

inline constexpr const char* kStabilityCsvHeader = "t,x,y,theta,v_cmd,omega_cmd,ax,ay,gz,flag";

/// Drives a circle of radius R at speed v (omega = v / R) until the heading
/// has accumulated 2*pi*revolutions. Instability is recorded, never fatal.
CircleRun drive_circle(double v, double radius, double revolutions, const RobotParams& params,
                       const StabilityConfig& stab, const CircleOptions& opts = {});

void write_stability_csv(std::ostream& out, const std::vector<StabilityRow>& rows);

/// Least-squares (Kasa) circle fit; returns {centre, radius}.
std::pair<Vec2, double> fit_circle(const std::vector<Pose2D>& points);

}  // namespace romr::sim
