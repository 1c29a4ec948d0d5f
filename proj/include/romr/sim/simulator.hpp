#pragma once

#include <cstdint>
#include <random>

#include "romr/core/geometry.hpp"
#include "romr/core/robot_params.hpp"
#include "romr/core/sensor_types.hpp"
#include "romr/drivetrain/kinematics.hpp"
#include "romr/sim/lidar_sim.hpp"
#include "romr/sim/stability.hpp"
#include "romr/sim/world_map.hpp"

namespace romr::sim {

/// Ground-truth simulation state. Advancing is a pure function of
/// (state, wheel speeds, dt).
struct SimState {
  Pose2D truth_pose;
  Twist2D twist;
  double time = 0.0;
  std::uint64_t rng_seed = 0;
  StabilityAssessment stability;
  double wheel_angle_left = 0.0;   // rad
  double wheel_angle_right = 0.0;  // rad
  long long ticks_left = 0;
  long long ticks_right = 0;
  double accel_forward = 0.0;  // m/s^2, dv/dt over the last step

  bool operator==(const SimState& o) const;
};

/// Advances the truth pose along the exact arc driven by the wheel speeds,
/// updates wheel angles and hall tick counters, and evaluates stability.
SimState step(const SimState& state, const drivetrain::WheelSpeeds& wheel_speeds, double dt,
              const RobotParams& params, const StabilityConfig& stab);

/// Noise-free IMU reading implied by the last step (body frame, z up).
ImuSample imu_from_state(const SimState& state);

/// Convenience wrapper owning world, state and RNG for sessions that also
/// need lidar sweeps.
class Simulator {
 public:
  Simulator(WorldMap world, RobotParams params, StabilityConfig stab, LidarSpec lidar,
            std::uint64_t seed, Pose2D start = {});

  const SimState& advance(const drivetrain::WheelSpeeds& w, double dt);
  LaserScan scan();

  const SimState& state() const { return state_; }
  const WorldMap& world() const { return world_; }
  const RobotParams& params() const { return params_; }
  const LidarSpec& lidar() const { return lidar_; }

 private:
  WorldMap world_;
  RobotParams params_;
  StabilityConfig stab_;
  LidarSpec lidar_;
  SimState state_;
  std::mt19937_64 rng_;
};

}  // namespace romr::sim
