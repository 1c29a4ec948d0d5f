#include "romr/slam/grid_interpolation.hpp"

#include <cmath>

namespace romr::slam {

InterpolatedValue bilinear_patch(double v00, double v10, double v01, double v11, double fx,
                                 double fy, double spacing) {
  InterpolatedValue out;
  const double gx = 1.0 - fx;
  const double gy = 1.0 - fy;
  out.value = gy * (gx * v00 + fx * v10) + fy * (gx * v01 + fx * v11);
  out.gradient.x() = (gy * (v10 - v00) + fy * (v11 - v01)) / spacing;
  out.gradient.y() = (gx * (v01 - v00) + fx * (v11 - v10)) / spacing;
  return out;
}

std::optional<InterpolatedValue> try_interpolate_occupancy(const OccupancyGrid& grid,
                                                           const Vec2& point) {
  // lattice nodes sit at cell centres
  const Vec2 m = grid.world_to_map(point) - Vec2(0.5, 0.5);
  const double fx0 = std::floor(m.x());
  const double fy0 = std::floor(m.y());
  if (!(fx0 >= 0 && fy0 >= 0 && fx0 + 1 < grid.width() && fy0 + 1 < grid.height())) {
    return std::nullopt;
  }
  const int ix = static_cast<int>(fx0);
  const int iy = static_cast<int>(fy0);
  InterpolatedValue out = bilinear_patch(
      grid.probability(ix, iy), grid.probability(ix + 1, iy), grid.probability(ix, iy + 1),
      grid.probability(ix + 1, iy + 1), m.x() - fx0, m.y() - fy0, grid.resolution());
  if (grid.origin().theta != 0.0) {
    // gradient was taken along the grid axes; rotate into the world frame
    const double c = std::cos(grid.origin().theta);
    const double s = std::sin(grid.origin().theta);
    const Vec2 g = out.gradient;
    out.gradient = Vec2(c * g.x() - s * g.y(), s * g.x() + c * g.y());
  }
  return out;
}

InterpolatedValue interpolate_occupancy(const OccupancyGrid& grid, const Vec2& point) {
  if (auto v = try_interpolate_occupancy(grid, point)) return *v;
  throw SlamError(SlamErrorCode::OutOfInterior, "query point outside grid interior");
}

}  // namespace romr::slam
