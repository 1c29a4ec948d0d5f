#pragma once

#include <cstdint>
#include <vector>

#include "romr/core/occupancy_grid.hpp"
#include "romr/core/robot_params.hpp"
#include "romr/mcl/likelihood_field.hpp"
#include "romr/mcl/particle_filter.hpp"
#include "romr/sim/lidar_sim.hpp"
#include "romr/sim/world_map.hpp"

namespace romr::harness {

struct MclOptions {
  std::size_t particles = 500;
  int cycles = 30;
  // A cycle ends once odometry has moved update_distance or turned
  // update_angle, or after max_steps_per_cycle simulation steps.
  double update_distance = 0.2;
  double update_angle = kPi / 6.0;
  int max_steps_per_cycle = 100;
  double dt = 0.01;
  double speed = 0.4;         // m/s when the way ahead is clear
  double turn_rate = 0.8;     // rad/s when turning away from a wall
  double clearance = 0.4;     // m, minimum start distance from walls
  double position_tolerance = 0.1;
  double heading_tolerance = 5.0 * kPi / 180.0;
  int beam_stride = 10;
  RobotParams params;
  sim::LidarSpec lidar;
  mcl::SensorModel sensor;
  mcl::MotionNoise motion;
  mcl::ResampleOptions resampling;
};

struct MclTrial {
  std::uint64_t seed = 0;
  Pose2D truth;  // map frame
  mcl::PoseEstimate estimate;
  double position_error = 0.0;
  double heading_error = 0.0;  // rad, absolute
  std::size_t final_particles = 0;
  bool converged = false;
};

/// Localisation map plus the transform placing the map frame in the world.
struct MclSetup {
  sim::WorldMap world;
  OccupancyGrid map;
  Pose2D map_in_world;
  mcl::LikelihoodField field;

  MclSetup(sim::WorldMap world, OccupancyGrid map, Pose2D map_in_world,
           const mcl::SensorModel& sensor = {});
};

/// Simple wall-avoiding driver standing in for a teleoperator: straight at
/// `speed` unless the lidar sees an obstacle within 0.8 m ahead, then turn
/// in place towards the more open side.
Twist2D avoid_walls(const Pose2D& pose_in_world, const sim::WorldMap& world,
                    const MclOptions& opts);

/// One global-localisation trial: random start, global initialisation,
/// `cycles` predict/update/resample rounds.
MclTrial run_mcl_trial(const MclSetup& setup, std::uint64_t seed, const MclOptions& opts = {});

/// Filter seeded near the truth; returns the position error after every
/// cycle while driving.
std::vector<double> run_mcl_tracking(const MclSetup& setup, std::uint64_t seed, int cycles,
                                     const MclOptions& opts = {});

}  // namespace romr::harness
