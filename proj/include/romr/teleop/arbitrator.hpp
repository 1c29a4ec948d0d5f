#pragma once

#include <array>
#include <mutex>
#include <optional>

#include "romr/core/geometry.hpp"

namespace romr::teleop {

/// Lower value wins.
enum class Source { Rc = 0, Gesture = 1, Joystick = 2 };

inline constexpr double kWatchdogTimeout = 0.5;  // s

struct Arbitration {
  Twist2D cmd;
  std::optional<Source> source;  // empty when the watchdog stopped the robot
  double stamp = 0.0;            // of the winning command
};

/// Latest command per source. Safe to submit from any thread; each submit
/// replaces its source's slot whole.
class Arbitrator {
 public:
  explicit Arbitrator(double timeout = kWatchdogTimeout) : timeout_(timeout) {}

  void submit(Source src, const Twist2D& cmd, double stamp);
  void clear(Source src);

  /// Highest-priority command younger than the timeout at `now`, else zero.
  Arbitration arbitrate(double now) const;

 private:
  struct Slot {
    Twist2D cmd;
    double stamp = 0.0;
    bool set = false;
  };
  double timeout_;
  mutable std::mutex mu_;
  std::array<Slot, 3> slots_;
};

/// Joystick passthrough: each axis clamped to its limit, non-finite input stops.
Twist2D joystick_to_twist(const Twist2D& stick, double v_max_cmd = 1.0, double omega_max_cmd = 1.0);

}  // namespace romr::teleop
