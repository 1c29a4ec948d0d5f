#include "romr/teleop/gesture.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace romr::teleop {

namespace {

// Degrees keep the ramp exact for whole-degree tilts.
double ramp(double deg, const GestureConfig& cfg) {
  const double mag = std::abs(deg);
  const double r = std::clamp((mag - cfg.deadzone_deg) / (cfg.full_scale_deg - cfg.deadzone_deg),
                              0.0, 1.0);
  return std::signbit(deg) ? -r : r;
}

}  // namespace

void GestureConfig::validate() const {
  if (!(deadzone_deg >= 0.0 && deadzone_deg < full_scale_deg && full_scale_deg < guard_deg &&
        guard_deg <= 90.0)) {
    throw TeleopError(TeleopErrorCode::BadConfig,
                      fmt::format("gesture angles must satisfy 0 <= {} < {} < {} <= 90",
                                  deadzone_deg, full_scale_deg, guard_deg));
  }
  if (!(v_max_cmd >= 0.0 && omega_max_cmd >= 0.0)) {
    throw TeleopError(TeleopErrorCode::BadConfig, "gesture speed limits must be non-negative");
  }
  if (!(filter_alpha >= 0.0 && filter_alpha <= 1.0)) {
    throw TeleopError(TeleopErrorCode::BadConfig, "filter alpha must lie in [0, 1]");
  }
}

Twist2D gesture_to_twist(const Attitude& att, const GestureConfig& cfg) {
  const double roll = rad_to_deg(att.roll);
  const double pitch = rad_to_deg(att.pitch);
  if (!std::isfinite(roll) || !std::isfinite(pitch)) return {};
  if (std::abs(roll) >= cfg.guard_deg || std::abs(pitch) >= cfg.guard_deg) return {};
  return {cfg.v_max_cmd * ramp(pitch, cfg), -(cfg.omega_max_cmd * ramp(roll, cfg))};
}

GesturePipeline::GesturePipeline(GestureConfig cfg) : cfg_(cfg) { cfg_.validate(); }

Twist2D GesturePipeline::feed(const ImuSample& imu) {
  if (!imu.is_finite()) return gesture_to_twist(att_, cfg_);
  if (!last_stamp_) {
    degenerate_ = !(imu.accel.norm() >= 0.5 * kGravity);
    if (!degenerate_) att_ = accel_attitude(imu.accel);
  } else {
    const double dt = imu.stamp - *last_stamp_;
    if (dt > 0.0) {
      // Gaps longer than the filter accepts are bridged by a single capped step.
      const auto step = complementary_filter(att_, imu, std::min(dt, 0.1), cfg_.filter_alpha);
      att_ = step.attitude;
      degenerate_ = step.accel_degenerate;
    }
  }
  if (!last_stamp_ || imu.stamp > *last_stamp_) last_stamp_ = imu.stamp;
  return gesture_to_twist(att_, cfg_);
}

}  // namespace romr::teleop
