#pragma once

#include "romr/core/error.hpp"
#include "romr/core/sensor_types.hpp"

namespace romr::teleop {

enum class TeleopErrorCode { BadTimestep, BadConfig };

using TeleopError = CodedError<TeleopErrorCode>;

/// Roll about body x, pitch about body y, radians.
struct Attitude {
  double roll = 0.0;
  double pitch = 0.0;
  bool operator==(const Attitude&) const = default;
};

struct FilterStep {
  Attitude attitude;
  bool accel_degenerate = false;  // |a| < g/2, the step was pure gyro integration
};

/// Tilt implied by a specific-force reading, assuming no linear acceleration.
Attitude accel_attitude(const Vec3& accel);

/// One blend step: alpha * (att + gyro * dt) + (1 - alpha) * accel angles.
/// dt must lie in (0, 0.1]; alpha in [0, 1].
FilterStep complementary_filter(const Attitude& att, const ImuSample& imu, double dt,
                                double alpha = 0.98);

}  // namespace romr::teleop
