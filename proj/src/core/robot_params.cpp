#include "romr/core/robot_params.hpp"

#include <stdexcept>

namespace romr {

void RobotParams::validate() const {
  if (!(wheel_radius > 0 && track_width > 0 && v_max > 0 && v_stable_max > 0 &&
        pole_pairs > 0 && mass_robot > 0 && payload_max > 0 && length > 0 &&
        width > 0 && height > 0 && cog_height > 0)) {
    throw std::invalid_argument("robot parameters must be strictly positive");
  }
  if (wheel_radius >= track_width) {
    throw std::invalid_argument("wheel radius must be smaller than track width");
  }
  if (v_stable_max > v_max) {
    throw std::invalid_argument("v_stable_max exceeds v_max");
  }
}

}  // namespace romr
