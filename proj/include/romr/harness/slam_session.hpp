#pragma once

#include <cstdint>
#include <vector>

#include "romr/core/geometry.hpp"
#include "romr/core/robot_params.hpp"
#include "romr/sim/lidar_sim.hpp"
#include "romr/sim/scripted_path.hpp"
#include "romr/sim/world_map.hpp"
#include "romr/slam/mapper.hpp"

namespace romr::harness {

struct SlamSessionOptions {
  double dt = 0.01;           // simulation step, s
  int steps_per_scan = 10;    // 10 Hz sweeps at the default dt
  RobotParams params;
  sim::LidarSpec lidar;
  slam::MapperOptions mapper;
};

/// Result of driving a scripted path while mapping. Poses are in the map
/// frame, whose origin is the start pose.
struct SlamSession {
  Pose2D start;
  slam::Mapper mapper;
  std::vector<double> stamps;
  std::vector<Pose2D> truth;
  std::vector<slam::ScanStatus> status;
  double path_length = 0.0;  // m, ground truth

  const std::vector<Pose2D>& estimate() const { return mapper.state().trajectory; }
  /// Translation error of the last estimate.
  double final_drift() const;
};

SlamSession run_slam_session(const sim::WorldMap& world, const sim::ScriptedPath& path,
                             const Pose2D& start, std::uint64_t seed,
                             const SlamSessionOptions& opts = {});

struct MapAccuracy {
  int wall_cells = 0;
  int wall_hits = 0;
  int free_cells = 0;
  int free_hits = 0;
  double wall_fraction() const { return wall_cells ? double(wall_hits) / wall_cells : 0.0; }
  double free_fraction() const { return free_cells ? double(free_hits) / free_cells : 0.0; }
};

/// Compares a map built from `start` with the true walls. A wall cell is
/// any cell crossed by a true segment and counts as recovered when an
/// occupied cell lies within `tolerance`. Free cells are the cells of the
/// space reachable from the start that are further than `tolerance` from
/// every wall; they count when classified free.
MapAccuracy evaluate_map(const OccupancyGrid& grid, const sim::WorldMap& world,
                         const Pose2D& start, double tolerance = 0.2);

}  // namespace romr::harness
