#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "romr/drivetrain/hall.hpp"
#include "romr/drivetrain/kinematics.hpp"
#include "romr/drivetrain/motor_axis.hpp"
#include "romr/drivetrain/odometry.hpp"
#include "romr/sim/circle_drive.hpp"

namespace romr::drivetrain {
namespace {

const RobotParams kParams{};

TEST(Kinematics, InverseExamples) {
  auto w = inverse_kinematics({0, 0}, kParams);
  EXPECT_EQ(w.speeds, (WheelSpeeds{0, 0}));
  EXPECT_FALSE(w.clamped);

  w = inverse_kinematics({0.825, 0}, kParams);
  EXPECT_NEAR(w.speeds.left, 10.0, 1e-12);
  EXPECT_NEAR(w.speeds.right, 10.0, 1e-12);

  // (track / 2) * omega / r = 0.145 * 2 / 0.0825
  w = inverse_kinematics({0, 2.0}, kParams);
  EXPECT_NEAR(w.speeds.left, -3.5151515151515151, 1e-12);
  EXPECT_NEAR(w.speeds.right, 3.5151515151515151, 1e-12);
}

TEST(Kinematics, ForwardExamples) {
  auto t = forward_kinematics({10, 10}, kParams);
  EXPECT_NEAR(t.v, 0.825, 1e-12);
  EXPECT_NEAR(t.omega, 0.0, 1e-12);
  t = forward_kinematics({-1, 1}, kParams);
  EXPECT_NEAR(t.v, 0.0, 1e-15);
  EXPECT_NEAR(t.omega, 2 * 0.0825 / 0.29, 1e-12);
  EXPECT_NEAR(t.omega, 0.56897, 1e-5);
  EXPECT_EQ(forward_kinematics({0, 0}, kParams), (Twist2D{0, 0}));
}

TEST(Kinematics, RoundTripWithinLimits) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> v(-kParams.v_max, kParams.v_max);
  std::uniform_real_distribution<double> w(-10.0, 10.0);
  for (int i = 0; i < 10000; ++i) {
    const Twist2D cmd{v(rng), w(rng)};
    const auto out = forward_kinematics(inverse_kinematics(cmd, kParams).speeds, kParams);
    EXPECT_NEAR(out.v, cmd.v, 1e-12);
    EXPECT_NEAR(out.omega, cmd.omega, 1e-12);
  }
}

TEST(Kinematics, ClampNeverExceedsVmaxAndKeepsCurvature) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> v(-20.0, 20.0);
  std::uniform_real_distribution<double> w(-10.0, 10.0);
  for (int i = 0; i < 10000; ++i) {
    const Twist2D cmd{v(rng), w(rng)};
    const auto wc = inverse_kinematics(cmd, kParams);
    const auto out = forward_kinematics(wc.speeds, kParams);
    EXPECT_LE(std::abs(out.v), kParams.v_max + 1e-12);
    EXPECT_EQ(wc.clamped, std::abs(cmd.v) > kParams.v_max);
    if (wc.clamped) {
      EXPECT_NEAR(out.omega / out.v, cmd.omega / cmd.v, 1e-9);
    }
  }
  bool clamped = false;
  EXPECT_EQ(clamp_twist({5.0, 1.0}, kParams, &clamped).v, 3.33);
  EXPECT_TRUE(clamped);
  EXPECT_EQ(clamp_twist({-5.0, 0.0}, kParams).v, -3.33);
}

TEST(Hall, DecodeExamples) {
  EXPECT_EQ(hall_decode(1, 3), +1);
  EXPECT_EQ(hall_decode(3, 1), -1);
  EXPECT_EQ(hall_decode(1, 1), 0);
  EXPECT_EQ(hall_decode(5, 1), +1);  // wraps around the cycle
  try {
    hall_decode(1, 0);
    FAIL() << "expected InvalidHallState";
  } catch (const HallError& e) {
    EXPECT_EQ(e.code(), HallErrorCode::InvalidHallState);
  }
  EXPECT_THROW(hall_decode(7, 1), HallError);
  try {
    hall_decode(1, 2);  // two steps forward
    FAIL() << "expected IllegalTransition";
  } catch (const HallError& e) {
    EXPECT_EQ(e.code(), HallErrorCode::IllegalTransition);
  }
}

// Walk the rotor through one mechanical revolution in tiny steps and count
// distinct hall transitions.
int EnumerateStatesPerRevolution(int pole_pairs) {
  int transitions = 0;
  HallCode prev = hall_code_for_angle(1e-9, pole_pairs);
  const int samples = 100000;
  for (int i = 1; i <= samples; ++i) {
    const HallCode code = hall_code_for_angle(1e-9 + kTwoPi * i / samples, pole_pairs);
    if (code != prev) ++transitions;
    prev = code;
  }
  return transitions;
}

TEST(Hall, TicksPerRevolution) {
  RobotParams p;
  EXPECT_EQ(ticks_per_revolution(p), 90);
  EXPECT_EQ(EnumerateStatesPerRevolution(15), 90);
  p.pole_pairs = 1;
  EXPECT_EQ(ticks_per_revolution(p), 6);
  EXPECT_EQ(EnumerateStatesPerRevolution(1), 6);
  p.pole_pairs = 2;
  EXPECT_EQ(ticks_per_revolution(p), 12);
  EXPECT_EQ(EnumerateStatesPerRevolution(2), 12);
}

TEST(Hall, DecodedSumMatchesNetAngle) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> step(-0.03, 0.05);
  for (int trial = 0; trial < 50; ++trial) {
    double angle = step(rng) * 10;
    const double start = angle;
    HallCode code = hall_code_for_angle(angle, 15);
    long long sum = 0;
    for (int i = 0; i < 2000; ++i) {
      angle += step(rng);  // < one tick (0.0698 rad) per sample
      const HallCode next = hall_code_for_angle(angle, 15);
      sum += hall_decode(code, next);
      code = next;
    }
    EXPECT_EQ(sum, tick_count_for_angle(angle, 15) - tick_count_for_angle(start, 15));
  }
}

TEST(Odometry, OneRevolutionBothWheels) {
  const Pose2D p = integrate_odometry({}, 90, 90, kParams);
  EXPECT_NEAR(p.x, kPi * 0.165, 1e-9);
  EXPECT_NEAR(p.x, 0.51836, 1e-5);
  EXPECT_NEAR(p.y, 0.0, 1e-12);
  EXPECT_NEAR(p.theta, 0.0, 1e-12);
}

TEST(Odometry, ZeroTicksUnchanged) {
  const Pose2D start(1.0, -2.0, 0.4);
  EXPECT_EQ(integrate_odometry(start, 0, 0, kParams), start);
}

TEST(Odometry, OppositeTicksRotateInPlace) {
  const double arc = arc_per_tick(kParams);
  for (long long n : {1LL, 7LL, 45LL}) {
    const Pose2D p = integrate_odometry({}, n, -n, kParams);
    EXPECT_NEAR(p.x, 0.0, 1e-12);
    EXPECT_NEAR(p.y, 0.0, 1e-12);
    EXPECT_NEAR(p.theta, normalize_angle(-(2.0 * arc * n) / kParams.track_width), 1e-12);
  }
}

TEST(Odometry, ConstantEqualSpeedsGiveStraightLine) {
  const double wheel_rate = 12.0;  // rad/s
  const double dt = 0.001;
  const int steps = 5000;
  TickOdometry odom(kParams);
  odom.update(0, 0);
  double angle = 0.0;
  for (int i = 1; i <= steps; ++i) {
    angle = wheel_rate * dt * i;
    const long long t = tick_count_for_angle(angle, kParams.pole_pairs);
    odom.update(t, t);
  }
  const double expected =
      static_cast<double>(tick_count_for_angle(angle, kParams.pole_pairs)) *
      arc_per_tick(kParams);
  EXPECT_NEAR(odom.pose().x, expected, 1e-9);
  // tick quantisation keeps odometry within one tick of r * w * T
  EXPECT_NEAR(odom.pose().x, kParams.wheel_radius * wheel_rate * dt * steps,
              arc_per_tick(kParams));
}

TEST(Odometry, CircleRadiusFromTicks) {
  sim::CircleOptions opts;
  opts.dt = 0.001;
  const auto run = sim::drive_circle(1.0, 2.0, 1.0, kParams, sim::StabilityConfig{}, opts);
  const auto [centre, radius] = sim::fit_circle(run.trajectory);
  EXPECT_NEAR(radius / 2.0, 1.0, 1e-3);
  EXPECT_NEAR(centre.x(), 0.0, 5e-3);
  EXPECT_NEAR(centre.y(), 2.0, 5e-3);
}

TEST(MotorAxis, ClosedLoopReachesOneTurnPerSecondThenStops) {
  MotorAxis axis;
  axis.request_state(AxisState::Calibrating);
  for (int i = 0; i < 2100; ++i) axis.step(0.001);
  EXPECT_TRUE(axis.state().calibrated);
  EXPECT_EQ(axis.state().mode, AxisState::Idle);

  EXPECT_EQ(axis.request_state(AxisState::ClosedLoopVelocity).mode,
            AxisState::ClosedLoopVelocity);
  EXPECT_TRUE(axis.set_input_vel(1.0));
  for (int i = 0; i < 1000; ++i) axis.step(0.001);  // 20 time constants
  EXPECT_NEAR(axis.state().measured_vel, 1.0, 1e-6);
  const long long ticks_after_spin = axis.state().tick_count;
  EXPECT_GT(ticks_after_spin, 0);
  // ticks follow the rotor position
  EXPECT_EQ(ticks_after_spin, tick_count_for_angle(axis.position_turns() * kTwoPi, 15));

  EXPECT_TRUE(axis.set_input_vel(0.0));
  for (int i = 0; i < 1000; ++i) axis.step(0.001);
  EXPECT_NEAR(axis.state().measured_vel, 0.0, 1e-6);

  axis.request_state(AxisState::Idle);
  EXPECT_EQ(axis.state().mode, AxisState::Idle);
  EXPECT_EQ(axis.state().input_vel, 0.0);
  EXPECT_TRUE(axis.dump_errors(false).empty());
}

TEST(MotorAxis, IdleToClosedLoopStopsMotor) {
  MotorAxis axis;
  axis.request_state(AxisState::Calibrating);
  axis.request_state(AxisState::ClosedLoopVelocity);  // queued behind calibration
  for (int i = 0; i < 2001; ++i) axis.step(0.001);
  ASSERT_EQ(axis.state().mode, AxisState::ClosedLoopVelocity);
  axis.set_input_vel(3.0);
  for (int i = 0; i < 500; ++i) axis.step(0.001);
  axis.request_state(AxisState::Idle);
  for (int i = 0; i < 1000; ++i) axis.step(0.001);
  EXPECT_NEAR(axis.state().measured_vel, 0.0, 1e-6);
}

TEST(MotorAxis, ClosedLoopBeforeCalibrationIsRejected) {
  MotorAxis axis;
  const auto& s = axis.request_state(AxisState::ClosedLoopVelocity);
  EXPECT_EQ(s.mode, AxisState::Idle);
  EXPECT_FALSE(axis.set_input_vel(1.0));
  EXPECT_EQ(axis.state().input_vel, 0.0);

  const auto errors = axis.dump_errors(true);
  ASSERT_EQ(errors.size(), 2u);
  EXPECT_EQ(errors[0], AxisError::NotCalibrated);  // insertion order
  EXPECT_EQ(errors[1], AxisError::InputRejected);
  EXPECT_TRUE(axis.dump_errors(false).empty());
}

TEST(MotorAxis, DumpErrorsClears) {
  MotorAxis axis;
  EXPECT_TRUE(axis.dump_errors(true).empty());
  axis.request_state(AxisState::ClosedLoopVelocity);
  axis.request_state(AxisState::ClosedLoopVelocity);  // no duplicate entry
  auto errors = axis.dump_errors(true);
  ASSERT_EQ(errors.size(), 1u);
  EXPECT_EQ(errors[0], AxisError::NotCalibrated);
  EXPECT_TRUE(axis.dump_errors(true).empty());
}

TEST(MotorAxis, InjectedCalibrationFault) {
  MotorAxis axis;
  axis.inject_calibration_fault();
  axis.request_state(AxisState::Calibrating);
  for (int i = 0; i < 2100; ++i) axis.step(0.001);
  EXPECT_FALSE(axis.state().calibrated);
  EXPECT_EQ(axis.state().mode, AxisState::Idle);
  EXPECT_EQ(axis.dump_errors(false), std::vector<AxisError>{AxisError::CalibrationFailed});
}

TEST(MotorAxis, HallStateAlwaysValid) {
  MotorAxis axis;
  axis.request_state(AxisState::Calibrating);
  for (int i = 0; i < 2001; ++i) axis.step(0.001);
  axis.request_state(AxisState::ClosedLoopVelocity);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> vel(-8.0, 8.0);
  for (int i = 0; i < 2000; ++i) {
    if (i % 100 == 0) axis.set_input_vel(vel(rng));
    axis.step(0.01);  // coarse step: several hall states per step
    EXPECT_NO_THROW(hall_sequence_index(axis.state().hall_state));
  }
  EXPECT_EQ(axis.state().tick_count,
            tick_count_for_angle(axis.position_turns() * kTwoPi, 15));
}

}  // namespace
}  // namespace romr::drivetrain
