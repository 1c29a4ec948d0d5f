#include "romr/sim/stability.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "romr/core/geometry.hpp"

namespace romr::sim {

void StabilityConfig::validate(const RobotParams& params) const {
  if (payload_mass < 0 || payload_mass > params.payload_max) {
    throw std::invalid_argument("payload mass outside [0, payload_max]");
  }
  if (std::abs(payload_pos) > params.length / 2) {
    throw std::invalid_argument("payload position beyond half the robot length");
  }
  if (!(payload_cog_height > 0) || !(friction_mu > 0)) {
    throw std::invalid_argument("payload height and friction must be positive");
  }
}

std::string_view StabilityAssessment::label() const {
  if (tipping && sliding) return "tipping+sliding";
  if (tipping) return "tipping";
  if (sliding) return "sliding";
  return "stable";
}

double effective_cog_height(const StabilityConfig& stab, const RobotParams& params) {
  const double m_r = params.mass_robot;
  const double m_p = stab.payload_mass;
  return (m_r * params.cog_height + m_p * stab.payload_cog_height) / (m_r + m_p);
}

StabilityAssessment assess_lateral_accel(double lateral_accel,
                                         const StabilityConfig& stab,
                                         const RobotParams& params) {
  StabilityAssessment out;
  out.lateral_accel = std::abs(lateral_accel);
  out.tipping_threshold =
      kGravity * (params.track_width / 2.0) / effective_cog_height(stab, params);
  out.sliding_threshold = stab.friction_mu * kGravity;
  out.tipping = out.lateral_accel > out.tipping_threshold;
  out.sliding = out.lateral_accel > out.sliding_threshold;
  return out;
}

StabilityAssessment check_stability(double v, double turn_radius,
                                    const StabilityConfig& stab,
                                    const RobotParams& params) {
  if (!(turn_radius > 0)) {
    throw std::invalid_argument("turn radius must be positive");
  }
  return assess_lateral_accel(v * v / turn_radius, stab, params);
}

double max_stable_speed(double turn_radius, const StabilityConfig& stab,
                        const RobotParams& params) {
  const auto limits = assess_lateral_accel(0.0, stab, params);
  return std::sqrt(std::min(limits.tipping_threshold, limits.sliding_threshold) *
                   turn_radius);
}

}  // namespace romr::sim
