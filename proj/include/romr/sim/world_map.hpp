#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "romr/core/error.hpp"
#include "romr/core/geometry.hpp"
#include "romr/core/occupancy_grid.hpp"

namespace romr::sim {

struct Segment {
  Vec2 a;
  Vec2 b;
};

struct Bounds {
  Vec2 min{-1e300, -1e300};
  Vec2 max{1e300, 1e300};
  bool contains(const Vec2& p) const {
    return p.x() >= min.x() && p.y() >= min.y() && p.x() <= max.x() && p.y() <= max.y();
  }
};

/// Static 2D world made of wall segments. Bounds are the bounding box of the
/// segments; a world without segments is unbounded.
struct WorldMap {
  std::vector<Segment> segments;
  Bounds bounds;

  static WorldMap from_segments(std::vector<Segment> segments);
};

enum class WorldErrorCode { Io, Parse };
using WorldError = CodedError<WorldErrorCode>;

/// Parses the text world format: one `x1 y1 x2 y2` segment per line in
/// metres; `#` starts a comment; blank lines are ignored.
WorldMap parse_world(std::istream& in, const std::string& source_name = "<stream>");
WorldMap load_world(const std::filesystem::path& path);
void write_world(std::ostream& out, const WorldMap& world);

/// Axis-aligned rectangular room with its lower-left corner at `corner`.
std::vector<Segment> rectangle(const Vec2& corner, double width, double height);

double distance_to_segment(const Vec2& p, const Segment& s);
double distance_to_world(const Vec2& p, const WorldMap& world);

/// Rasterises the walls into an occupancy grid: wall cells saturate
/// occupied, cells reachable from `free_seed` without crossing a wall are
/// free, and everything else stays unknown.
OccupancyGrid rasterize_world(const WorldMap& world, double resolution,
                              const Vec2& free_seed, double margin = 1.0);

}  // namespace romr::sim
