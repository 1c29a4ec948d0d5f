#pragma once

#include <string_view>
#include <vector>

#include "romr/drivetrain/hall.hpp"

namespace romr::drivetrain {

enum class AxisState { Idle, Calibrating, ClosedLoopVelocity };

enum class AxisError {
  NotCalibrated,      // closed loop requested before a successful calibration
  CalibrationFailed,  // calibration fault injected / detected
  InputRejected,      // input_vel written while not in closed loop
};

std::string_view to_string(AxisState s);
std::string_view to_string(AxisError e);

/// Snapshot of one controller axis.
struct MotorAxisState {
  AxisState mode = AxisState::Idle;
  double input_vel = 0.0;     // turns/s
  double measured_vel = 0.0;  // turns/s
  HallCode hall_state = kHallSequence[0];
  long long tick_count = 0;
  std::vector<AxisError> errors;  // insertion order, no duplicates
  bool calibrated = false;
};

struct MotorAxisConfig {
  double velocity_time_constant = 0.05;  // s, first-order lag of the velocity loop
  double calibration_duration = 2.0;     // s of simulated time
  int pole_pairs = 15;
};

/// Velocity-controlled BLDC axis modelled on the ODrive state machine:
/// Idle -> Calibrating -> (Idle | ClosedLoopVelocity), ClosedLoopVelocity ->
/// Idle. All mutation happens on the caller's stepping thread.
class MotorAxis {
 public:
  explicit MotorAxis(MotorAxisConfig config = {});

  /// Requests a state transition and returns the resulting snapshot.
  /// Requesting closed loop on an uncalibrated idle axis records
  /// NotCalibrated and leaves the axis idle. Requesting closed loop while
  /// calibrating enters it once calibration succeeds.
  const MotorAxisState& request_state(AxisState requested);

  /// Accepted only in closed loop; otherwise records InputRejected.
  bool set_input_vel(double turns_per_second);

  /// Advances the velocity loop, rotor angle, hall sampling and calibration.
  void step(double dt);

  /// Returns the accumulated errors; clears them when `clear` is set.
  std::vector<AxisError> dump_errors(bool clear);

  /// Makes the next (or current) calibration fail.
  void inject_calibration_fault() { fault_pending_ = true; }

  const MotorAxisState& state() const { return state_; }
  double position_turns() const { return position_turns_; }

 private:
  void record(AxisError e);

  MotorAxisConfig config_;
  MotorAxisState state_;
  double position_turns_ = 0.0;
  double calibration_elapsed_ = 0.0;
  bool closed_loop_after_calibration_ = false;
  bool fault_pending_ = false;
};

}  // namespace romr::drivetrain
