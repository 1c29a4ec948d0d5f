#include "romr/teleop/arbitrator.hpp"

#include <algorithm>

namespace romr::teleop {

void Arbitrator::submit(Source src, const Twist2D& cmd, double stamp) {
  std::lock_guard lock(mu_);
  slots_[static_cast<std::size_t>(src)] = {cmd, stamp, true};
}

void Arbitrator::clear(Source src) {
  std::lock_guard lock(mu_);
  slots_[static_cast<std::size_t>(src)] = {};
}

Arbitration Arbitrator::arbitrate(double now) const {
  std::lock_guard lock(mu_);
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    const Slot& s = slots_[i];
    if (s.set && now - s.stamp < timeout_) {
      return {s.cmd, static_cast<Source>(i), s.stamp};
    }
  }
  return {};
}

Twist2D joystick_to_twist(const Twist2D& stick, double v_max_cmd, double omega_max_cmd) {
  if (!stick.is_finite()) return {};
  return {std::clamp(stick.v, -v_max_cmd, v_max_cmd),
          std::clamp(stick.omega, -omega_max_cmd, omega_max_cmd)};
}

}  // namespace romr::teleop
