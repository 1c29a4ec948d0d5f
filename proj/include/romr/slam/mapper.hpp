#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "romr/core/occupancy_grid.hpp"
#include "romr/core/sensor_types.hpp"
#include "romr/slam/scan_matcher.hpp"

namespace romr::slam {

struct MapperOptions {
  double resolution = 0.05;
  int width = 400;   // cells
  int height = 400;  // cells
  Pose2D origin{-10.0, -10.0, 0.0};
  double l_occ = 0.85;
  double l_free = -0.4;
  double l_min = -4.0;
  double l_max = 4.0;
  MatchOptions match;
};

struct MapperState {
  OccupancyGrid grid;
  Pose2D last_pose;
  std::size_t scan_count = 0;
  std::vector<Pose2D> trajectory;
};

enum class ScanStatus {
  Initialized,   // first scan, mapped at the origin pose
  Matched,       // matcher converged
  NotConverged,  // matcher hit its iteration cap; pose used anyway
  Fallback,      // matcher diverged; mapped at the previous pose
};

struct ScanUpdate {
  Pose2D estimate;
  ScanStatus status = ScanStatus::Initialized;
  MatchResult match;
};

MapperState make_mapper_state(const MapperOptions& opts);

/// Cells visited by the integer line from `from` to `to`, excluding `to`.
/// Stops at the grid border.
std::vector<CellIndex> trace_line(const OccupancyGrid& grid, const Vec2& from, const Vec2& to);

/// Log-odds update from one scan taken at `pose`. Each cell changes at most
/// once per scan: beam endpoints gain l_occ, cells traversed by a beam and
/// not hit by any beam gain l_free. Beams without a return clear up to
/// range_max and add no endpoint.
void update_map(MapperState& state, const LaserScan& scan, const Pose2D& pose,
                const MapperOptions& opts);

/// Lidar-only mapping session: each scan is matched against the map built so
/// far (seeded at the previous estimate unless an odometry seed is given)
/// and then integrated at the matched pose.
class Mapper {
 public:
  explicit Mapper(MapperOptions opts = {});

  /// Throws SlamError(DegenerateHessian) without touching the state.
  ScanUpdate process_scan(const LaserScan& scan,
                          const std::optional<Pose2D>& odometry_seed = std::nullopt);

  const MapperState& state() const { return state_; }
  const OccupancyGrid& grid() const { return state_.grid; }
  const MapperOptions& options() const { return opts_; }

 private:
  MapperOptions opts_;
  MapperState state_;
};

}  // namespace romr::slam
