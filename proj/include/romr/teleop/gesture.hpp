#pragma once

#include <optional>

#include "romr/core/geometry.hpp"
#include "romr/teleop/complementary_filter.hpp"

namespace romr::teleop {

/// Tilt-to-velocity mapping. Angles in degrees, limits in SI units.
struct GestureConfig {
  double deadzone_deg = 5.0;
  double full_scale_deg = 45.0;
  double v_max_cmd = 1.0;
  double omega_max_cmd = 1.0;
  double guard_deg = 80.0;
  double filter_alpha = 0.98;

  /// Throws TeleopError(BadConfig) unless 0 <= deadzone < full_scale < guard <= 90.
  void validate() const;
};

/// Pitch forward drives forward; roll right turns clockwise (negative omega).
/// A tilt at or past the guard on either axis holds the robot still.
Twist2D gesture_to_twist(const Attitude& att, const GestureConfig& cfg = {});

/// Filter plus mapping, fed raw IMU samples in stamp order. The first sample
/// seeds the attitude from the accelerometer.
class GesturePipeline {
 public:
  explicit GesturePipeline(GestureConfig cfg = {});

  Twist2D feed(const ImuSample& imu);

  const Attitude& attitude() const { return att_; }
  bool last_accel_degenerate() const { return degenerate_; }

 private:
  GestureConfig cfg_;
  Attitude att_;
  std::optional<double> last_stamp_;
  bool degenerate_ = false;
};

}  // namespace romr::teleop
