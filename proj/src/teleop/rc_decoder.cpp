#include "romr/teleop/rc_decoder.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "romr/teleop/complementary_filter.hpp"

namespace romr::teleop {

void RcCalibration::validate() const {
  const std::array<int, 3> chans{steering_channel, throttle_channel, enable_channel};
  for (int c : chans) {
    if (c < 0 || c > 2) {
      throw TeleopError(TeleopErrorCode::BadConfig, fmt::format("rc channel index {} out of range", c));
    }
  }
  if (chans[0] == chans[1] || chans[0] == chans[2] || chans[1] == chans[2]) {
    throw TeleopError(TeleopErrorCode::BadConfig, "rc channels must be distinct");
  }
  if (!(plausible_min <= pulse_min && pulse_min < pulse_neutral && pulse_neutral < pulse_max &&
        pulse_max <= plausible_max)) {
    throw TeleopError(TeleopErrorCode::BadConfig, "rc pulse calibration is not ordered");
  }
  if (!(deadband >= 0.0 && v_max_cmd >= 0.0 && omega_max_cmd >= 0.0)) {
    throw TeleopError(TeleopErrorCode::BadConfig, "rc deadband and limits must be non-negative");
  }
}

double rc_axis(double pulse, const RcCalibration& cal) {
  const double off = pulse - cal.pulse_neutral;
  if (std::abs(off) <= cal.deadband) return 0.0;
  const double span = off > 0 ? cal.pulse_max - cal.pulse_neutral : cal.pulse_neutral - cal.pulse_min;
  return std::clamp(off / span, -1.0, 1.0);
}

RcCommand rc_decode(const RcFrame& frame, const RcCalibration& cal) {
  RcCommand out;
  for (std::size_t i = 0; i < frame.ch.size(); ++i) {
    const double p = frame.ch[i];
    if (!(p >= cal.plausible_min && p <= cal.plausible_max)) {
      out.status = RcStatus::InvalidFrame;
      out.diagnostic = fmt::format("CH{} pulse {} us outside [{}, {}]", i + 1, p,
                                   cal.plausible_min, cal.plausible_max);
      return out;
    }
  }
  if (frame.ch[static_cast<std::size_t>(cal.enable_channel)] < cal.enable_threshold) return out;
  out.status = RcStatus::Enabled;
  out.cmd.v = cal.v_max_cmd * rc_axis(frame.ch[static_cast<std::size_t>(cal.throttle_channel)], cal);
  out.cmd.omega =
      -(cal.omega_max_cmd * rc_axis(frame.ch[static_cast<std::size_t>(cal.steering_channel)], cal));
  return out;
}

}  // namespace romr::teleop
