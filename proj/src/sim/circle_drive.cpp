#include "romr/sim/circle_drive.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "romr/drivetrain/kinematics.hpp"
#include "romr/drivetrain/odometry.hpp"
#include "romr/sim/simulator.hpp"

namespace romr::sim {

CircleRun drive_circle(double v, double radius, double revolutions, const RobotParams& params,
                       const StabilityConfig& stab, const CircleOptions& opts) {
  if (!(radius > 0)) throw std::invalid_argument("circle radius must be positive");
  if (std::abs(v) > params.v_max) throw std::invalid_argument("speed exceeds v_max");
  if (revolutions < 0) throw std::invalid_argument("negative revolution count");

  CircleRun run;
  const Twist2D cmd{v, v / radius};
  const double sweep = kTwoPi * revolutions;
  const auto steps = cmd.omega == 0.0
                         ? 0LL
                         : static_cast<long long>(std::ceil(sweep / (std::abs(cmd.omega) * opts.dt) - 1e-9));
  if (steps == 0) return run;

  const auto wheels = drivetrain::inverse_kinematics(cmd, params).speeds;
  drivetrain::TickOdometry odom(params);
  SimState state;
  odom.update(state.ticks_left, state.ticks_right);
  run.trajectory.reserve(static_cast<std::size_t>(steps));
  run.rows.reserve(static_cast<std::size_t>(steps));

  for (long long k = 0; k < steps; ++k) {
    state = step(state, wheels, opts.dt, params, stab);
    state.time = static_cast<double>(k + 1) * opts.dt;
    const Pose2D& pose = odom.update(state.ticks_left, state.ticks_right);
    const ImuSample imu = imu_from_state(state);

    run.trajectory.push_back(pose);
    run.truth.push_back(state.truth_pose);
    run.rows.push_back({state.time, pose, cmd.v, cmd.omega, imu.accel.x(), imu.accel.y(),
                        imu.gyro.z(), std::string(state.stability.label())});
    if (state.stability.lateral_accel >= run.worst.lateral_accel) run.worst = state.stability;
    if (!state.stability.stable() && !run.ever_unstable) {
      run.ever_unstable = true;
      run.first_unstable_time = state.time;
    }
  }
  return run;
}

void write_stability_csv(std::ostream& out, const std::vector<StabilityRow>& rows) {
  out << kStabilityCsvHeader << '\n';
  for (const auto& r : rows) {
    out << fmt::format("{:.3f},{:.6f},{:.6f},{:.6f},{:.4f},{:.4f},{:.6f},{:.6f},{:.6f},{}\n",
                       r.t, r.odom.x, r.odom.y, r.odom.theta, r.v_cmd, r.omega_cmd, r.ax,
                       r.ay, r.gz, r.flag);
  }
}

std::pair<Vec2, double> fit_circle(const std::vector<Pose2D>& points) {
  if (points.size() < 3) throw std::invalid_argument("circle fit needs three points");
  // x^2 + y^2 + D x + E y + F = 0, linear least squares in (D, E, F).
  Eigen::MatrixXd a(static_cast<Eigen::Index>(points.size()), 3);
  Eigen::VectorXd b(static_cast<Eigen::Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    a(row, 0) = points[i].x;
    a(row, 1) = points[i].y;
    a(row, 2) = 1.0;
    b(row) = -(points[i].x * points[i].x + points[i].y * points[i].y);
  }
  const Eigen::Vector3d sol = a.colPivHouseholderQr().solve(b);
  const Vec2 centre(-sol(0) / 2.0, -sol(1) / 2.0);
  const double radius = std::sqrt(centre.squaredNorm() - sol(2));
  return {centre, radius};
}

}  // namespace romr::sim
