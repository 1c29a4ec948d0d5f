#include "romr/drivetrain/hall.hpp"

#include <cmath>
#include <string>

#include "romr/core/geometry.hpp"

namespace romr::drivetrain {

int hall_sequence_index(HallCode code) {
  for (int i = 0; i < static_cast<int>(kHallSequence.size()); ++i) {
    if (kHallSequence[i] == code) return i;
  }
  throw HallError(HallErrorCode::InvalidHallState,
                  "invalid hall state " + std::to_string(code));
}

int hall_decode(HallCode prev, HallCode next) {
  const int a = hall_sequence_index(prev);
  const int b = hall_sequence_index(next);
  const int step = ((b - a) % 6 + 6) % 6;
  switch (step) {
    case 0:
      return 0;
    case 1:
      return +1;
    case 5:
      return -1;
    default:
      throw HallError(HallErrorCode::IllegalTransition,
                      "hall transition " + std::to_string(prev) + " -> " +
                          std::to_string(next) + " skips a state");
  }
}

int ticks_per_revolution(const RobotParams& params) { return 6 * params.pole_pairs; }

long long tick_count_for_angle(double mech_angle, int pole_pairs) {
  const double ticks = mech_angle * (6.0 * pole_pairs) / kTwoPi;
  return static_cast<long long>(std::floor(ticks));
}

HallCode hall_code_for_angle(double mech_angle, int pole_pairs) {
  const long long tick = tick_count_for_angle(mech_angle, pole_pairs);
  return kHallSequence[static_cast<std::size_t>(((tick % 6) + 6) % 6)];
}

}  // namespace romr::drivetrain
