#include "romr/sim/simulator.hpp"

#include <cmath>
#include <stdexcept>

#include "romr/drivetrain/hall.hpp"
#include "romr/drivetrain/odometry.hpp"

namespace romr::sim {

bool SimState::operator==(const SimState& o) const {
  return truth_pose == o.truth_pose && twist == o.twist && time == o.time &&
         rng_seed == o.rng_seed && stability.tipping == o.stability.tipping &&
         stability.sliding == o.stability.sliding &&
         stability.lateral_accel == o.stability.lateral_accel &&
         wheel_angle_left == o.wheel_angle_left &&
         wheel_angle_right == o.wheel_angle_right && ticks_left == o.ticks_left &&
         ticks_right == o.ticks_right && accel_forward == o.accel_forward;
}

SimState step(const SimState& state, const drivetrain::WheelSpeeds& wheel_speeds, double dt,
              const RobotParams& params, const StabilityConfig& stab) {
  if (!(dt > 0.0 && dt <= 0.1)) {
    throw std::invalid_argument("sim step dt must be in (0, 0.1]");
  }
  SimState next = state;
  const double r = params.wheel_radius;
  next.truth_pose =
      drivetrain::integrate_arc(state.truth_pose, r * wheel_speeds.left * dt,
                                r * wheel_speeds.right * dt, params.track_width);
  next.twist = drivetrain::forward_kinematics(wheel_speeds, params);
  next.accel_forward = (next.twist.v - state.twist.v) / dt;
  next.time = state.time + dt;
  next.wheel_angle_left = state.wheel_angle_left + wheel_speeds.left * dt;
  next.wheel_angle_right = state.wheel_angle_right + wheel_speeds.right * dt;
  next.ticks_left = drivetrain::tick_count_for_angle(next.wheel_angle_left, params.pole_pairs);
  next.ticks_right =
      drivetrain::tick_count_for_angle(next.wheel_angle_right, params.pole_pairs);
  next.stability = assess_lateral_accel(next.twist.v * next.twist.omega, stab, params);
  return next;
}

ImuSample imu_from_state(const SimState& state) {
  ImuSample imu;
  imu.accel = Vec3(state.accel_forward, state.twist.v * state.twist.omega, kGravity);
  imu.gyro = Vec3(0.0, 0.0, state.twist.omega);
  imu.stamp = state.time;
  return imu;
}

Simulator::Simulator(WorldMap world, RobotParams params, StabilityConfig stab,
                     LidarSpec lidar, std::uint64_t seed, Pose2D start)
    : world_(std::move(world)),
      params_(params),
      stab_(stab),
      lidar_(lidar),
      rng_(seed) {
  params_.validate();
  stab_.validate(params_);
  state_.truth_pose = start;
  state_.rng_seed = seed;
}

const SimState& Simulator::advance(const drivetrain::WheelSpeeds& w, double dt) {
  state_ = step(state_, w, dt, params_, stab_);
  return state_;
}

LaserScan Simulator::scan() {
  LaserScan s = simulate_lidar(state_.truth_pose, world_, lidar_, rng_);
  s.stamp = state_.time;
  return s;
}

}  // namespace romr::sim
