#pragma once

#include <vector>

#include "romr/core/occupancy_grid.hpp"

namespace romr::mcl {

struct SensorModel {
  double sigma_hit = 0.1;  // m
  double z_hit = 0.9;
  double z_rand = 0.1;
  double max_distance = 2.0;  // distances are capped here, m

  /// Throws std::invalid_argument unless the mixture weights sum to 1 and
  /// the scales are positive.
  void validate() const;
};

/// Distance from every cell centre to the nearest occupied cell centre,
/// precomputed with an exact Euclidean distance transform.
class LikelihoodField {
 public:
  LikelihoodField() = default;
  LikelihoodField(const OccupancyGrid& map, SensorModel model = {});

  const SensorModel& model() const { return model_; }
  int width() const { return width_; }
  int height() const { return height_; }
  double resolution() const { return frame_.resolution(); }

  /// Capped distance at a world point; max_distance off the map.
  double distance(const Vec2& p) const;
  double distance(int ix, int iy) const {
    return distances_[static_cast<std::size_t>(iy) * width_ + ix];
  }

  /// z_hit * N(d; 0, sigma_hit) + z_rand / range_max.
  double beam_likelihood(double distance, double range_max) const;

 private:
  SensorModel model_;
  OccupancyGrid frame_;  // geometry only, no cells
  int width_ = 0;
  int height_ = 0;
  std::vector<double> distances_;
};

/// Squared Euclidean distance transform of a binary image, in cell units.
/// Feature pixels are 0; pixels are row-major, `width` per row. Images
/// without features come back as +infinity.
std::vector<double> squared_distance_transform(const std::vector<bool>& feature, int width,
                                               int height);

}  // namespace romr::mcl
