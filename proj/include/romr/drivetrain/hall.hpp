#pragma once

#include <array>
#include <cstdint>

#include "romr/core/error.hpp"
#include "romr/core/robot_params.hpp"

namespace romr::drivetrain {

// Hall code bit order, following the J4 port lettering:
//   bit 0 = A (yellow wire), bit 1 = B (blue wire), bit 2 = Z (green wire).
using HallCode = std::uint8_t;

/// Forward commutation order over one electrical cycle.
inline constexpr std::array<HallCode, 6> kHallSequence = {1, 3, 2, 6, 4, 5};

enum class HallErrorCode { InvalidHallState, IllegalTransition };

using HallError = CodedError<HallErrorCode>;

/// Position of a code in kHallSequence; throws InvalidHallState for 0, 7 and
/// anything above 7.
int hall_sequence_index(HallCode code);

/// Tick delta between consecutive samples: +1 one step forward, -1 one step
/// back, 0 unchanged. A jump of two or more states means a sample was missed
/// and raises IllegalTransition.
int hall_decode(HallCode prev, HallCode next);

/// Hall states per mechanical revolution (6 per electrical cycle).
int ticks_per_revolution(const RobotParams& params);

/// Hall code the rotor presents at a given mechanical angle (rad).
HallCode hall_code_for_angle(double mech_angle, int pole_pairs);

/// Absolute tick counter value for a mechanical angle: floor(angle / tick).
long long tick_count_for_angle(double mech_angle, int pole_pairs);

}  // namespace romr::drivetrain
