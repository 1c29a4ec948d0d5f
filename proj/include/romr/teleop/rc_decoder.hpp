#pragma once

#include <array>
#include <string>

#include "romr/core/geometry.hpp"

namespace romr::teleop {

/// Receiver pulse widths in microseconds, indexed by channel (CH1..CH3).
struct RcFrame {
  std::array<double, 3> ch{1500.0, 1500.0, 1000.0};
};

/// Which channel carries what, and how pulses map to commands. Higher
/// steering pulses turn clockwise.
struct RcCalibration {
  int steering_channel = 0;
  int throttle_channel = 1;
  int enable_channel = 2;
  double pulse_min = 1000.0;
  double pulse_neutral = 1500.0;
  double pulse_max = 2000.0;
  double deadband = 20.0;
  double enable_threshold = 1700.0;
  double plausible_min = 800.0;
  double plausible_max = 2200.0;
  double v_max_cmd = 1.0;
  double omega_max_cmd = 1.0;

  /// Throws TeleopError(BadConfig) on duplicate channels or unordered pulses.
  void validate() const;
};

enum class RcStatus { Enabled, Disabled, InvalidFrame };

struct RcCommand {
  Twist2D cmd;  // zero unless Enabled
  RcStatus status = RcStatus::Disabled;
  std::string diagnostic;  // set for InvalidFrame
};

/// Normalised stick position in [-1, 1]; zero inside the deadband.
double rc_axis(double pulse, const RcCalibration& cal);

RcCommand rc_decode(const RcFrame& frame, const RcCalibration& cal = {});

}  // namespace romr::teleop
