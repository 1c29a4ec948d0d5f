#include "romr/harness/slam_session.hpp"

#include <cmath>
#include <set>
#include <utility>

#include "romr/drivetrain/kinematics.hpp"
#include "romr/sim/simulator.hpp"

namespace romr::harness {

double SlamSession::final_drift() const {
  if (truth.empty()) return 0.0;
  const Pose2D& e = estimate().back();
  return std::hypot(e.x - truth.back().x, e.y - truth.back().y);
}

SlamSession run_slam_session(const sim::WorldMap& world, const sim::ScriptedPath& path,
                             const Pose2D& start, std::uint64_t seed,
                             const SlamSessionOptions& opts) {
  SlamSession session{start, slam::Mapper(opts.mapper), {}, {}, {}, 0.0};
  sim::Simulator simulator(world, opts.params, {}, opts.lidar, seed, start);

  auto take_scan = [&]() {
    const LaserScan scan = simulator.scan();
    const slam::ScanUpdate update = session.mapper.process_scan(scan);
    session.stamps.push_back(simulator.state().time);
    session.truth.push_back(relative_pose(start, simulator.state().truth_pose));
    session.status.push_back(update.status);
  };

  for (long long step = 0;; ++step) {
    const double t = static_cast<double>(step) * opts.dt;
    const auto cmd = path.command_at(t);
    if (step % opts.steps_per_scan == 0 || !cmd) take_scan();
    if (!cmd) break;
    const Vec2 before = simulator.state().truth_pose.translation();
    simulator.advance(drivetrain::inverse_kinematics(*cmd, opts.params).speeds, opts.dt);
    session.path_length += (simulator.state().truth_pose.translation() - before).norm();
  }
  return session;
}

MapAccuracy evaluate_map(const OccupancyGrid& grid, const sim::WorldMap& world,
                         const Pose2D& start, double tolerance) {
  MapAccuracy acc;
  const double res = grid.resolution();
  const Pose2D to_map = inverse_pose(start);

  std::set<std::pair<int, int>> wall_cells;
  for (const auto& seg : world.segments) {
    const double len = (seg.b - seg.a).norm();
    const int n = std::max(1, static_cast<int>(std::ceil(len / (0.25 * res))));
    for (int i = 0; i <= n; ++i) {
      const Vec2 p = seg.a + (seg.b - seg.a) * (static_cast<double>(i) / n);
      if (auto c = grid.world_to_grid(transform_point(to_map, p))) wall_cells.insert({c->x, c->y});
    }
  }
  const int reach = static_cast<int>(std::ceil(tolerance / res));
  for (const auto& [cx, cy] : wall_cells) {
    ++acc.wall_cells;
    const Vec2 centre = grid.grid_to_world({cx, cy});
    bool found = false;
    for (int dy = -reach; dy <= reach && !found; ++dy) {
      for (int dx = -reach; dx <= reach && !found; ++dx) {
        const int x = cx + dx, y = cy + dy;
        if (!grid.contains(x, y) || grid.classify({x, y}) != CellClass::Occupied) continue;
        found = (grid.grid_to_world({x, y}) - centre).norm() <= tolerance + 1e-9;
      }
    }
    if (found) ++acc.wall_hits;
  }

  const OccupancyGrid truth = sim::rasterize_world(world, res, start.translation());
  for (int y = 0; y < grid.height(); ++y) {
    for (int x = 0; x < grid.width(); ++x) {
      const Vec2 p = transform_point(start, grid.grid_to_world({x, y}));
      const auto tc = truth.world_to_grid(p);
      if (!tc || truth.classify(*tc) != CellClass::Free) continue;
      if (sim::distance_to_world(p, world) <= tolerance) continue;
      ++acc.free_cells;
      if (grid.classify({x, y}) == CellClass::Free) ++acc.free_hits;
    }
  }
  return acc;
}

}  // namespace romr::harness
