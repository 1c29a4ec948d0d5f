#include "romr/core/occupancy_grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace romr {

OccupancyGrid::OccupancyGrid(int width, int height, double resolution, Pose2D origin,
                             double l_min, double l_max)
    : width_(width),
      height_(height),
      resolution_(resolution),
      origin_(origin),
      l_min_(l_min),
      l_max_(l_max) {
  if (width <= 0 || height <= 0 || !(resolution > 0)) {
    throw std::invalid_argument("grid dimensions and resolution must be positive");
  }
  if (!(l_min < 0 && l_max > 0)) {
    throw std::invalid_argument("log-odds clamp must straddle zero");
  }
  cells_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), 0.0);
}

Vec2 OccupancyGrid::world_to_map(const Vec2& p) const {
  const double dx = p.x() - origin_.x;
  const double dy = p.y() - origin_.y;
  if (origin_.theta == 0.0) {
    return {dx / resolution_, dy / resolution_};
  }
  const double c = std::cos(origin_.theta);
  const double s = std::sin(origin_.theta);
  return {(c * dx + s * dy) / resolution_, (-s * dx + c * dy) / resolution_};
}

Vec2 OccupancyGrid::map_to_world(const Vec2& m) const {
  const double lx = m.x() * resolution_;
  const double ly = m.y() * resolution_;
  if (origin_.theta == 0.0) {
    return {origin_.x + lx, origin_.y + ly};
  }
  return transform_point(origin_, {lx, ly});
}

std::optional<CellIndex> OccupancyGrid::world_to_grid(const Vec2& p) const {
  const Vec2 m = world_to_map(p);
  const double fx = std::floor(m.x());
  const double fy = std::floor(m.y());
  if (!(fx >= 0 && fy >= 0 && fx < width_ && fy < height_)) {
    return std::nullopt;
  }
  return CellIndex{static_cast<int>(fx), static_cast<int>(fy)};
}

Vec2 OccupancyGrid::grid_to_world(CellIndex c) const {
  return map_to_world({c.x + 0.5, c.y + 0.5});
}

void OccupancyGrid::set_log_odds(CellIndex c, double l) {
  cells_[index(c)] = std::clamp(l, l_min_, l_max_);
}

double OccupancyGrid::probability(CellIndex c) const {
  return log_odds_to_probability(log_odds(c));
}

CellClass OccupancyGrid::classify(CellIndex c, double occupied_thresh,
                                  double free_thresh) const {
  const double p = probability(c);
  if (p > occupied_thresh) return CellClass::Occupied;
  if (p < free_thresh) return CellClass::Free;
  return CellClass::Unknown;
}

double log_odds_to_probability(double l) { return 1.0 - 1.0 / (1.0 + std::exp(l)); }

double probability_to_log_odds(double p) { return std::log(p / (1.0 - p)); }

}  // namespace romr
