#include "romr/sim/world_map.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

namespace romr::sim {

WorldMap WorldMap::from_segments(std::vector<Segment> segments) {
  WorldMap world;
  world.segments = std::move(segments);
  if (world.segments.empty()) return world;
  Vec2 lo = world.segments.front().a;
  Vec2 hi = lo;
  for (const auto& s : world.segments) {
    lo = lo.cwiseMin(s.a).cwiseMin(s.b);
    hi = hi.cwiseMax(s.a).cwiseMax(s.b);
  }
  world.bounds = {lo, hi};
  return world;
}

WorldMap parse_world(std::istream& in, const std::string& source_name) {
  std::vector<Segment> segments;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    double v[4];
    int n = 0;
    while (n < 4 && fields >> v[n]) ++n;
    if (n == 0 && fields.eof()) continue;
    std::string rest;
    if (n != 4 || (fields >> rest)) {
      throw WorldError(WorldErrorCode::Parse,
                       fmt::format("{}:{}: expected `x1 y1 x2 y2`", source_name, line_no));
    }
    for (double x : v) {
      if (!std::isfinite(x)) {
        throw WorldError(WorldErrorCode::Parse,
                         fmt::format("{}:{}: non-finite coordinate", source_name, line_no));
      }
    }
    segments.push_back({{v[0], v[1]}, {v[2], v[3]}});
  }
  return WorldMap::from_segments(std::move(segments));
}

WorldMap load_world(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw WorldError(WorldErrorCode::Io, "cannot open world file " + path.string());
  }
  return parse_world(in, path.string());
}

void write_world(std::ostream& out, const WorldMap& world) {
  for (const auto& s : world.segments) {
    out << fmt::format("{} {} {} {}\n", s.a.x(), s.a.y(), s.b.x(), s.b.y());
  }
}

std::vector<Segment> rectangle(const Vec2& corner, double width, double height) {
  const Vec2 p0 = corner;
  const Vec2 p1 = corner + Vec2(width, 0);
  const Vec2 p2 = corner + Vec2(width, height);
  const Vec2 p3 = corner + Vec2(0, height);
  return {{p0, p1}, {p1, p2}, {p2, p3}, {p3, p0}};
}

double distance_to_segment(const Vec2& p, const Segment& s) {
  const Vec2 d = s.b - s.a;
  const double len2 = d.squaredNorm();
  if (len2 == 0.0) return (p - s.a).norm();
  const double t = std::clamp((p - s.a).dot(d) / len2, 0.0, 1.0);
  return (p - (s.a + t * d)).norm();
}

double distance_to_world(const Vec2& p, const WorldMap& world) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& s : world.segments) best = std::min(best, distance_to_segment(p, s));
  return best;
}

OccupancyGrid rasterize_world(const WorldMap& world, double resolution,
                              const Vec2& free_seed, double margin) {
  if (world.segments.empty()) {
    throw std::invalid_argument("cannot rasterise an empty world");
  }
  // Half-cell offset: walls on multiples of the resolution fall on cell
  // centres instead of being floored onto one side of a boundary.
  const double pad = margin + 0.5 * resolution;
  const Vec2 lo = world.bounds.min - Vec2(pad, pad);
  const Vec2 span = world.bounds.max - world.bounds.min + Vec2(2 * pad, 2 * pad);
  const int w = static_cast<int>(std::ceil(span.x() / resolution));
  const int h = static_cast<int>(std::ceil(span.y() / resolution));
  OccupancyGrid grid(w, h, resolution, Pose2D(lo.x(), lo.y(), 0.0));

  std::vector<char> wall(static_cast<std::size_t>(w) * h, 0);
  for (const auto& s : world.segments) {
    const double len = (s.b - s.a).norm();
    const int samples = std::max(1, static_cast<int>(std::ceil(len / (0.25 * resolution))));
    for (int k = 0; k <= samples; ++k) {
      const Vec2 p = s.a + (s.b - s.a) * (static_cast<double>(k) / samples);
      if (auto c = grid.world_to_grid(p)) {
        wall[static_cast<std::size_t>(c->y) * w + c->x] = 1;
        grid.set_log_odds(*c, grid.l_max());
      }
    }
  }

  const auto seed = grid.world_to_grid(free_seed);
  if (!seed || wall[static_cast<std::size_t>(seed->y) * w + seed->x]) {
    throw std::invalid_argument("free seed is off-grid or inside a wall");
  }
  std::vector<char> seen(wall.size(), 0);
  std::deque<CellIndex> queue{*seed};
  seen[static_cast<std::size_t>(seed->y) * w + seed->x] = 1;
  while (!queue.empty()) {
    const CellIndex c = queue.front();
    queue.pop_front();
    grid.set_log_odds(c, grid.l_min());
    constexpr int kDx[] = {1, -1, 0, 0};
    constexpr int kDy[] = {0, 0, 1, -1};
    for (int k = 0; k < 4; ++k) {
      const CellIndex n{c.x + kDx[k], c.y + kDy[k]};
      if (!grid.contains(n)) continue;
      const auto idx = static_cast<std::size_t>(n.y) * w + n.x;
      if (seen[idx] || wall[idx]) continue;
      seen[idx] = 1;
      queue.push_back(n);
    }
  }
  return grid;
}

}  // namespace romr::sim
