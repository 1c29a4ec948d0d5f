#include "romr/slam/mapper.hpp"

#include <cmath>
#include <cstdlib>

namespace romr::slam {

MapperState make_mapper_state(const MapperOptions& opts) {
  MapperState state;
  state.grid = OccupancyGrid(opts.width, opts.height, opts.resolution, opts.origin,
                             opts.l_min, opts.l_max);
  return state;
}

std::vector<CellIndex> trace_line(const OccupancyGrid& grid, const Vec2& from, const Vec2& to) {
  std::vector<CellIndex> cells;
  const Vec2 a = grid.world_to_map(from);
  const Vec2 b = grid.world_to_map(to);
  int x0 = static_cast<int>(std::floor(a.x()));
  int y0 = static_cast<int>(std::floor(a.y()));
  const int x1 = static_cast<int>(std::floor(b.x()));
  const int y1 = static_cast<int>(std::floor(b.y()));
  const int dx = std::abs(x1 - x0);
  const int dy = -std::abs(y1 - y0);
  const int sx = x0 < x1 ? 1 : -1;
  const int sy = y0 < y1 ? 1 : -1;
  int err = dx + dy;
  cells.reserve(static_cast<std::size_t>(dx - dy + 1));
  while (!(x0 == x1 && y0 == y1)) {
    if (!grid.contains(x0, y0)) break;
    cells.push_back({x0, y0});
    const int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      x0 += sx;
    }
    if (e2 <= dx) {
      err += dx;
      y0 += sy;
    }
  }
  return cells;
}

void update_map(MapperState& state, const LaserScan& scan, const Pose2D& pose,
                const MapperOptions& opts) {
  OccupancyGrid& grid = state.grid;
  const std::size_t n_cells =
      static_cast<std::size_t>(grid.width()) * static_cast<std::size_t>(grid.height());
  // 0 untouched, 1 freed this scan, 2 hit this scan
  std::vector<std::uint8_t> mark(n_cells, 0);
  auto flat = [&](CellIndex c) {
    return static_cast<std::size_t>(c.y) * static_cast<std::size_t>(grid.width()) +
           static_cast<std::size_t>(c.x);
  };

  std::vector<CellIndex> hits;
  std::vector<Vec2> ray_ends;
  ray_ends.reserve(scan.ranges.size());
  for (std::size_t i = 0; i < scan.ranges.size(); ++i) {
    const double r = scan.ranges[i];
    const double a = pose.theta + scan.beam_angle(i);
    const Vec2 dir(std::cos(a), std::sin(a));
    if (std::isinf(r) && r > 0) {
      ray_ends.push_back(pose.translation() + scan.range_max * dir);
      continue;
    }
    if (!scan.is_valid_return(r)) continue;
    const Vec2 end = pose.translation() + r * dir;
    ray_ends.push_back(end);
    if (auto c = grid.world_to_grid(end)) {
      if (mark[flat(*c)] != 2) {
        mark[flat(*c)] = 2;
        hits.push_back(*c);
      }
    }
  }

  for (const Vec2& end : ray_ends) {
    for (const CellIndex& c : trace_line(grid, pose.translation(), end)) {
      auto& m = mark[flat(c)];
      if (m != 0) continue;
      m = 1;
      grid.add_log_odds(c, opts.l_free);
    }
  }
  for (const CellIndex& c : hits) grid.add_log_odds(c, opts.l_occ);
}

Mapper::Mapper(MapperOptions opts) : opts_(opts), state_(make_mapper_state(opts_)) {}

ScanUpdate Mapper::process_scan(const LaserScan& scan,
                                const std::optional<Pose2D>& odometry_seed) {
  ScanUpdate update;
  if (state_.scan_count == 0) {
    update.estimate = Pose2D{};
    update.status = ScanStatus::Initialized;
  } else {
    const Pose2D seed = odometry_seed.value_or(state_.last_pose);
    try {
      update.match = match_scan(state_.grid, scan, seed, opts_.match);
      update.estimate = update.match.pose;
      update.status = update.match.converged ? ScanStatus::Matched : ScanStatus::NotConverged;
    } catch (const SlamError& e) {
      if (e.code() != SlamErrorCode::Diverged) throw;
      update.estimate = state_.last_pose;
      update.status = ScanStatus::Fallback;
    }
  }
  update_map(state_, scan, update.estimate, opts_);
  state_.last_pose = update.estimate;
  state_.trajectory.push_back(update.estimate);
  ++state_.scan_count;
  return update;
}

}  // namespace romr::slam
