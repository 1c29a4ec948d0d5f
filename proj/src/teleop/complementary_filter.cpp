#include "romr/teleop/complementary_filter.hpp"

#include <cmath>

#include <fmt/format.h>

namespace romr::teleop {

Attitude accel_attitude(const Vec3& a) {
  return {std::atan2(a.y(), a.z()), std::atan2(-a.x(), std::hypot(a.y(), a.z()))};
}

FilterStep complementary_filter(const Attitude& att, const ImuSample& imu, double dt,
                                double alpha) {
  if (!(dt > 0.0 && dt <= 0.1)) {
    throw TeleopError(TeleopErrorCode::BadTimestep,
                      fmt::format("filter timestep {} s outside (0, 0.1]", dt));
  }
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw TeleopError(TeleopErrorCode::BadConfig, fmt::format("filter alpha {} outside [0, 1]", alpha));
  }
  FilterStep out;
  const Attitude gyro{att.roll + imu.gyro.x() * dt, att.pitch + imu.gyro.y() * dt};
  if (!(imu.accel.norm() >= 0.5 * kGravity)) {
    out.attitude = gyro;
    out.accel_degenerate = true;
    return out;
  }
  const Attitude acc = accel_attitude(imu.accel);
  out.attitude.roll = alpha * gyro.roll + (1.0 - alpha) * acc.roll;
  out.attitude.pitch = alpha * gyro.pitch + (1.0 - alpha) * acc.pitch;
  return out;
}

}  // namespace romr::teleop
