#pragma once

#include <string_view>

#include "romr/core/robot_params.hpp"

namespace romr::sim {

/// Load case for the quasi-static stability model. Payload position is the
/// longitudinal offset of the payload from the base midpoint; it is carried
/// through to reports but does not enter the lateral criterion.
struct StabilityConfig {
  double payload_mass = 0.0;         // kg
  double payload_pos = 0.0;          // m, + = front
  double payload_cog_height = 0.30;  // m above ground
  double friction_mu = 1.0;

  void validate(const RobotParams& params) const;
};

struct StabilityAssessment {
  double lateral_accel = 0.0;      // m/s^2
  double tipping_threshold = 0.0;  // m/s^2
  double sliding_threshold = 0.0;  // m/s^2
  bool tipping = false;
  bool sliding = false;

  bool stable() const { return !tipping && !sliding; }
  /// "stable", "tipping", "sliding" or "tipping+sliding".
  std::string_view label() const;
};

/// Combined centre-of-gravity height of robot and payload.
double effective_cog_height(const StabilityConfig& stab, const RobotParams& params);

/// Steady turn at speed v on radius R: tips when v^2/R exceeds
/// g * (track/2) / h_cog, slides when it exceeds mu * g.
StabilityAssessment check_stability(double v, double turn_radius,
                                    const StabilityConfig& stab,
                                    const RobotParams& params);

/// Same criterion from a lateral acceleration directly (R may be infinite).
StabilityAssessment assess_lateral_accel(double lateral_accel,
                                         const StabilityConfig& stab,
                                         const RobotParams& params);

/// Largest speed that stays stable on radius R.
double max_stable_speed(double turn_radius, const StabilityConfig& stab,
                        const RobotParams& params);

}  // namespace romr::sim
