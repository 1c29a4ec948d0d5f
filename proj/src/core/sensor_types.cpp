#include "romr/core/sensor_types.hpp"

#include <stdexcept>

namespace romr {

void LaserScan::validate() const {
  if (!(angle_increment > 0) || !(angle_max >= angle_min)) {
    throw std::invalid_argument("scan angular metadata inconsistent");
  }
  if (ranges.size() != expected_size()) {
    throw std::invalid_argument("scan range count does not match metadata");
  }
  for (double r : ranges) {
    if (std::isfinite(r) && (r < range_min || r > range_max)) {
      throw std::invalid_argument("finite range outside [range_min, range_max]");
    }
    if (std::isnan(r)) {
      throw std::invalid_argument("NaN range");
    }
  }
}

LaserScan make_full_circle_scan(std::size_t beams, double range_min, double range_max) {
  LaserScan scan;
  scan.angle_increment = kTwoPi / static_cast<double>(beams);
  scan.angle_min = -kPi;
  scan.angle_max = -kPi + scan.angle_increment * static_cast<double>(beams - 1);
  scan.range_min = range_min;
  scan.range_max = range_max;
  scan.ranges.assign(beams, kNoReturn);
  return scan;
}

}  // namespace romr
