#include "romr/drivetrain/motor_axis.hpp"

#include <algorithm>
#include <cmath>

#include "romr/core/geometry.hpp"

namespace romr::drivetrain {

std::string_view to_string(AxisState s) {
  switch (s) {
    case AxisState::Idle:
      return "IDLE";
    case AxisState::Calibrating:
      return "CALIBRATING";
    case AxisState::ClosedLoopVelocity:
      return "CLOSED_LOOP_VELOCITY";
  }
  return "?";
}

std::string_view to_string(AxisError e) {
  switch (e) {
    case AxisError::NotCalibrated:
      return "NOT_CALIBRATED";
    case AxisError::CalibrationFailed:
      return "CALIBRATION_FAILED";
    case AxisError::InputRejected:
      return "INPUT_REJECTED";
  }
  return "?";
}

MotorAxis::MotorAxis(MotorAxisConfig config) : config_(config) {
  state_.hall_state = hall_code_for_angle(0.0, config_.pole_pairs);
}

void MotorAxis::record(AxisError e) {
  if (std::find(state_.errors.begin(), state_.errors.end(), e) == state_.errors.end()) {
    state_.errors.push_back(e);
  }
}

const MotorAxisState& MotorAxis::request_state(AxisState requested) {
  switch (requested) {
    case AxisState::Idle:
      state_.mode = AxisState::Idle;
      state_.input_vel = 0.0;
      closed_loop_after_calibration_ = false;
      break;
    case AxisState::Calibrating:
      if (state_.mode != AxisState::Calibrating) {
        state_.mode = AxisState::Calibrating;
        state_.input_vel = 0.0;
        state_.calibrated = false;
        calibration_elapsed_ = 0.0;
      }
      break;
    case AxisState::ClosedLoopVelocity:
      if (state_.mode == AxisState::Calibrating) {
        closed_loop_after_calibration_ = true;
      } else if (!state_.calibrated) {
        record(AxisError::NotCalibrated);
        state_.mode = AxisState::Idle;
      } else {
        state_.mode = AxisState::ClosedLoopVelocity;
      }
      break;
  }
  return state_;
}

bool MotorAxis::set_input_vel(double turns_per_second) {
  if (state_.mode != AxisState::ClosedLoopVelocity) {
    record(AxisError::InputRejected);
    return false;
  }
  state_.input_vel = turns_per_second;
  return true;
}

void MotorAxis::step(double dt) {
  if (state_.mode == AxisState::Calibrating) {
    calibration_elapsed_ += dt;
    if (calibration_elapsed_ >= config_.calibration_duration) {
      if (fault_pending_) {
        fault_pending_ = false;
        record(AxisError::CalibrationFailed);
        state_.calibrated = false;
        state_.mode = AxisState::Idle;
      } else {
        state_.calibrated = true;
        state_.mode = closed_loop_after_calibration_ ? AxisState::ClosedLoopVelocity
                                                     : AxisState::Idle;
      }
      closed_loop_after_calibration_ = false;
    }
  }

  const double target =
      state_.mode == AxisState::ClosedLoopVelocity ? state_.input_vel : 0.0;
  const double blend = 1.0 - std::exp(-dt / config_.velocity_time_constant);
  const double v0 = state_.measured_vel;
  state_.measured_vel = v0 + (target - v0) * blend;

  // Rotor travel under trapezoidal integration of the lagged velocity, sampled
  // finely enough that consecutive hall readings differ by at most one state.
  const double start = position_turns_;
  const double delta = 0.5 * (v0 + state_.measured_vel) * dt;
  const double ticks_moved = std::abs(delta) * 6.0 * config_.pole_pairs;
  const int substeps = static_cast<int>(std::floor(ticks_moved)) + 2;
  for (int k = 1; k <= substeps; ++k) {
    const double turns = k == substeps ? start + delta : start + delta * k / substeps;
    const HallCode code = hall_code_for_angle(turns * kTwoPi, config_.pole_pairs);
    state_.tick_count += hall_decode(state_.hall_state, code);
    state_.hall_state = code;
  }
  position_turns_ = start + delta;
}

std::vector<AxisError> MotorAxis::dump_errors(bool clear) {
  std::vector<AxisError> out = state_.errors;
  if (clear) state_.errors.clear();
  return out;
}

}  // namespace romr::drivetrain
