#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "romr/core/geometry.hpp"

namespace romr {

struct CellIndex {
  int x = 0;
  int y = 0;
  bool operator==(const CellIndex&) const = default;
};

enum class CellClass { Free, Unknown, Occupied };

inline constexpr double kOccupiedThresh = 0.65;
inline constexpr double kFreeThresh = 0.196;

/// Log-odds occupancy grid. Cell (0, 0) has its lower-left corner at `origin`;
/// x runs along columns, y along rows. Values are clamped to [l_min, l_max].
class OccupancyGrid {
 public:
  OccupancyGrid() = default;
  OccupancyGrid(int width, int height, double resolution, Pose2D origin = {},
                double l_min = -4.0, double l_max = 4.0);

  int width() const { return width_; }
  int height() const { return height_; }
  double resolution() const { return resolution_; }
  const Pose2D& origin() const { return origin_; }
  double l_min() const { return l_min_; }
  double l_max() const { return l_max_; }
  bool empty() const { return cells_.empty(); }

  bool contains(int ix, int iy) const {
    return ix >= 0 && iy >= 0 && ix < width_ && iy < height_;
  }
  bool contains(CellIndex c) const { return contains(c.x, c.y); }

  /// Continuous map coordinates in cell units (cell (i, j) spans [i, i+1)).
  Vec2 world_to_map(const Vec2& p) const;
  Vec2 map_to_world(const Vec2& m) const;

  /// floor((p - origin) / resolution); nullopt when the point is off the grid.
  std::optional<CellIndex> world_to_grid(const Vec2& p) const;
  /// World coordinates of the cell centre.
  Vec2 grid_to_world(CellIndex c) const;

  double log_odds(CellIndex c) const { return cells_[index(c)]; }
  double log_odds(int ix, int iy) const { return cells_[index({ix, iy})]; }
  void set_log_odds(CellIndex c, double l);
  void add_log_odds(CellIndex c, double delta) { set_log_odds(c, log_odds(c) + delta); }

  double probability(CellIndex c) const;
  double probability(int ix, int iy) const { return probability(CellIndex{ix, iy}); }
  CellClass classify(CellIndex c, double occupied_thresh = kOccupiedThresh,
                     double free_thresh = kFreeThresh) const;

  const std::vector<double>& cells() const { return cells_; }

  bool operator==(const OccupancyGrid&) const = default;

 private:
  std::size_t index(CellIndex c) const {
    return static_cast<std::size_t>(c.y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(c.x);
  }

  int width_ = 0;
  int height_ = 0;
  double resolution_ = 0.05;
  Pose2D origin_;
  double l_min_ = -4.0;
  double l_max_ = 4.0;
  std::vector<double> cells_;
};

double log_odds_to_probability(double l);
double probability_to_log_odds(double p);

}  // namespace romr
