#include "romr/harness/mcl_session.hpp"

#include <cmath>
#include <random>

#include "romr/drivetrain/kinematics.hpp"
#include "romr/drivetrain/odometry.hpp"
#include "romr/sim/simulator.hpp"

namespace romr::harness {

MclSetup::MclSetup(sim::WorldMap world_, OccupancyGrid map_, Pose2D map_in_world_,
                   const mcl::SensorModel& sensor)
    : world(std::move(world_)),
      map(std::move(map_)),
      map_in_world(map_in_world_),
      field(map, sensor) {}

Twist2D avoid_walls(const Pose2D& pose, const sim::WorldMap& world, const MclOptions& opts) {
  auto clear = [&](double bearing) {
    return sim::ray_cast(pose.translation(), pose.theta + bearing, world).value_or(1e9);
  };
  const double ahead = std::min({clear(0.0), clear(deg_to_rad(20.0)), clear(deg_to_rad(-20.0))});
  if (ahead > 0.8) return {opts.speed, 0.0};
  return {0.0, clear(kPi / 2) >= clear(-kPi / 2) ? opts.turn_rate : -opts.turn_rate};
}

namespace {

Pose2D random_start(const MclSetup& setup, std::mt19937_64& rng, const MclOptions& opts) {
  const auto& b = setup.world.bounds;
  std::uniform_real_distribution<double> ux(b.min.x(), b.max.x());
  std::uniform_real_distribution<double> uy(b.min.y(), b.max.y());
  std::uniform_real_distribution<double> uth(-kPi, kPi);
  const Pose2D to_map = inverse_pose(setup.map_in_world);
  while (true) {
    const Vec2 p(ux(rng), uy(rng));
    if (sim::distance_to_world(p, setup.world) < opts.clearance) continue;
    const auto cell = setup.map.world_to_grid(transform_point(to_map, p));
    if (!cell || setup.map.classify(*cell) != CellClass::Free) continue;
    return Pose2D(p.x(), p.y(), uth(rng));
  }
}

// Drives the simulator for one filter cycle and returns the odometry increment.
Pose2D drive_cycle(sim::Simulator& simulator, drivetrain::TickOdometry& odom,
                   const MclSetup& setup, const MclOptions& opts) {
  const Pose2D before = odom.pose();
  Pose2D delta;
  for (int k = 0; k < opts.max_steps_per_cycle; ++k) {
    const Twist2D cmd = avoid_walls(simulator.state().truth_pose, setup.world, opts);
    simulator.advance(drivetrain::inverse_kinematics(cmd, opts.params).speeds, opts.dt);
    odom.update(simulator.state().ticks_left, simulator.state().ticks_right);
    delta = relative_pose(before, odom.pose());
    if (std::hypot(delta.x, delta.y) >= opts.update_distance ||
        std::abs(delta.theta) >= opts.update_angle) {
      break;
    }
  }
  return delta;
}

void filter_cycle(mcl::ParticleSet& ps, const Pose2D& delta, const LaserScan& scan,
                  const MclSetup& setup, const MclOptions& opts) {
  mcl::predict(ps, delta, opts.motion);
  mcl::update_weights(ps, scan, setup.field, opts.beam_stride);
  mcl::resample(ps, opts.resampling);
}

}  // namespace

MclTrial run_mcl_trial(const MclSetup& setup, std::uint64_t seed, const MclOptions& opts) {
  std::mt19937_64 rng(seed);
  const Pose2D start = random_start(setup, rng, opts);
  sim::Simulator simulator(setup.world, opts.params, {}, opts.lidar, rng(), start);
  drivetrain::TickOdometry odom(opts.params);
  odom.update(simulator.state().ticks_left, simulator.state().ticks_right);
  mcl::ParticleSet ps = mcl::init_global(setup.map, opts.particles, rng());

  mcl::update_weights(ps, simulator.scan(), setup.field, opts.beam_stride);
  mcl::resample(ps, opts.resampling);
  for (int cycle = 0; cycle < opts.cycles; ++cycle) {
    const Pose2D delta = drive_cycle(simulator, odom, setup, opts);
    filter_cycle(ps, delta, simulator.scan(), setup, opts);
  }

  MclTrial trial;
  trial.seed = seed;
  trial.truth = relative_pose(setup.map_in_world, simulator.state().truth_pose);
  trial.estimate = mcl::estimate(ps);
  trial.position_error = std::hypot(trial.estimate.pose.x - trial.truth.x,
                                    trial.estimate.pose.y - trial.truth.y);
  trial.heading_error = std::abs(angle_diff(trial.estimate.pose.theta, trial.truth.theta));
  trial.final_particles = ps.size();
  trial.converged = trial.position_error <= opts.position_tolerance &&
                    trial.heading_error <= opts.heading_tolerance;
  return trial;
}

std::vector<double> run_mcl_tracking(const MclSetup& setup, std::uint64_t seed, int cycles,
                                     const MclOptions& opts) {
  std::mt19937_64 rng(seed);
  const Pose2D start = random_start(setup, rng, opts);
  sim::Simulator simulator(setup.world, opts.params, {}, opts.lidar, rng(), start);
  drivetrain::TickOdometry odom(opts.params);
  odom.update(simulator.state().ticks_left, simulator.state().ticks_right);

  mcl::ParticleSet ps;
  ps.rng.seed(rng());
  const Pose2D truth = relative_pose(setup.map_in_world, start);
  std::normal_distribution<double> jitter(0.0, 1.0);
  for (std::size_t i = 0; i < opts.particles; ++i) {
    ps.particles.push_back({Pose2D(truth.x + 0.03 * jitter(ps.rng), truth.y + 0.03 * jitter(ps.rng),
                                   truth.theta + 0.02 * jitter(ps.rng)),
                            1.0 / static_cast<double>(opts.particles)});
  }

  std::vector<double> errors;
  for (int cycle = 0; cycle < cycles; ++cycle) {
    const Pose2D delta = drive_cycle(simulator, odom, setup, opts);
    filter_cycle(ps, delta, simulator.scan(), setup, opts);
    const Pose2D est = mcl::estimate(ps).pose;
    const Pose2D t = relative_pose(setup.map_in_world, simulator.state().truth_pose);
    errors.push_back(std::hypot(est.x - t.x, est.y - t.y));
  }
  return errors;
}

}  // namespace romr::harness
