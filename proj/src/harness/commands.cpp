#include "romr/harness/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>
#include <thread>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "romr/bus/bag.hpp"
#include "romr/bus/topic_bus.hpp"
#include "romr/bus/websocket_bridge.hpp"
#include "romr/drivetrain/kinematics.hpp"
#include "romr/drivetrain/odometry.hpp"
#include "romr/harness/mcl_session.hpp"
#include "romr/harness/slam_session.hpp"
#include "romr/sim/circle_drive.hpp"
#include "romr/sim/scripted_path.hpp"
#include "romr/sim/simulator.hpp"
#include "romr/sim/world_map.hpp"
#include "romr/slam/map_io.hpp"
#include "romr/teleop/arbitrator.hpp"

namespace romr::harness {
namespace fs = std::filesystem;

namespace {

std::ofstream open_output(const fs::path& p) {
  if (p.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(p.parent_path(), ec);
  }
  std::ofstream out(p, std::ios::binary);
  if (!out) throw HarnessError(HarnessErrorCode::Io, "cannot write " + p.string());
  return out;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (!fs::is_directory(dir)) throw HarnessError(HarnessErrorCode::Io, "cannot create " + dir.string());
}

template <typename Code>
int code_exit(Code c) {
  return c == Code::Io ? kExitIo : kExitConfig;
}

// Runs a command body and maps library errors onto exit codes.
template <typename F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const HarnessError& e) {
    fmt::print(err, "error: {}\n", e.what());
    switch (e.code()) {
      case HarnessErrorCode::Io: return kExitIo;
      case HarnessErrorCode::Parse: return kExitConfig;
      case HarnessErrorCode::Usage: return kExitUsage;
    }
  } catch (const sim::WorldError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return code_exit(e.code());
  } catch (const slam::MapIoError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return code_exit(e.code());
  } catch (const bus::BusError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return e.code() == bus::BusErrorCode::Io ? kExitIo : kExitConfig;
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
  }
  return 1;
}

}  // namespace

// ---------------------------------------------------------------- stability

std::vector<StabilityOutcome> run_stability(const std::vector<StabilityCase>& cases,
                                            const fs::path& out_dir, double revolutions) {
  ensure_dir(out_dir);
  const RobotParams params;
  std::vector<StabilityOutcome> outcomes;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const StabilityCase& c = cases[i];
    const sim::CircleRun run =
        sim::drive_circle(c.vel, c.radius, revolutions, params, c.stability_config());
    StabilityOutcome o{c, run.worst, run.ever_unstable, fmt::format("row_{:02d}.csv", i + 1)};
    auto csv = open_output(out_dir / o.csv);
    sim::write_stability_csv(csv, run.rows);
    outcomes.push_back(std::move(o));
  }
  return outcomes;
}

void write_stability_summary(std::ostream& out, const std::vector<StabilityOutcome>& rows) {
  out << "row,vel,payload,pcog,radius,lateral_accel,tipping_threshold,sliding_threshold,"
         "worst,classification,csv\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    fmt::print(out, "{},{:.3f},{:.3f},{:.3f},{:.3f},{:.6f},{:.6f},{:.6f},{},{},{}\n", i + 1,
               r.run.vel, r.run.payload, r.run.pcog, r.run.radius, r.worst.lateral_accel,
               r.worst.tipping_threshold, r.worst.sliding_threshold, r.worst.label(),
               r.classification(), r.csv);
  }
}

int cmd_stability(const StabilityArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto cases = args.config ? load_stability_config(*args.config) : default_stability_cases();
    std::vector<std::string> expected;
    if (args.expect) expected = load_expectations(*args.expect);

    const auto rows = run_stability(cases, args.out, args.revolutions);
    {
      auto summary = open_output(args.out / "summary.csv");
      write_stability_summary(summary, rows);
    }
    std::size_t unstable = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& r = rows[i];
      unstable += r.unstable;
      fmt::print(out, "{:2d}  v={:.2f} m/s  R={:.2f} m  payload={:.1f} kg  pcog={:.2f} m  ay={:.3f} m/s^2  {}\n",
                 i + 1, r.run.vel, r.run.radius, r.run.payload, r.run.pcog,
                 r.worst.lateral_accel, r.classification());
    }
    fmt::print(out, "{} rows, {} unstable; summary in {}\n", rows.size(), unstable,
               (args.out / "summary.csv").string());

    if (!args.expect) return kExitOk;
    int mismatches = 0;
    if (expected.size() != rows.size()) {
      fmt::print(err, "expectation file has {} entries for {} rows\n", expected.size(), rows.size());
      ++mismatches;
    }
    for (std::size_t i = 0; i < std::min(expected.size(), rows.size()); ++i) {
      if (expected[i] != rows[i].classification()) {
        fmt::print(err, "row {}: expected {}, got {}\n", i + 1, expected[i], rows[i].classification());
        ++mismatches;
      }
    }
    return mismatches ? kExitMismatch : kExitOk;
  });
}

// ---------------------------------------------------------------- slam

int cmd_slam(const SlamArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto world = sim::load_world(args.world);
    const auto path = sim::load_path(args.path);
    const SlamSession session = run_slam_session(world, path, args.start, args.seed);

    if (args.out.has_parent_path()) ensure_dir(args.out.parent_path());
    slam::save_map(session.mapper.grid(), args.out);
    const fs::path traj_path = args.out.string() + "_trajectory.csv";
    {
      auto csv = open_output(traj_path);
      csv << "t,x,y,theta,true_x,true_y,true_theta,status\n";
      const auto& est = session.estimate();
      const std::size_t n = std::min({est.size(), session.truth.size(), session.stamps.size()});
      for (std::size_t i = 0; i < n; ++i) {
        const char* status = "";
        if (i < session.status.size()) {
          switch (session.status[i]) {
            case slam::ScanStatus::Initialized: status = "initialized"; break;
            case slam::ScanStatus::Matched: status = "matched"; break;
            case slam::ScanStatus::NotConverged: status = "not_converged"; break;
            case slam::ScanStatus::Fallback: status = "fallback"; break;
          }
        }
        fmt::print(csv, "{:.3f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{}\n", session.stamps[i],
                   est[i].x, est[i].y, est[i].theta, session.truth[i].x, session.truth[i].y,
                   session.truth[i].theta, status);
      }
    }
    const MapAccuracy acc = evaluate_map(session.mapper.grid(), world, session.start);
    fmt::print(out, "scans: {}\n", session.stamps.size());
    fmt::print(out, "path length: {:.3f} m\n", session.path_length);
    fmt::print(out, "final drift: {:.4f} m\n", session.final_drift());
    fmt::print(out, "wall cells recovered: {:.2f}% of {}\n", 100 * acc.wall_fraction(), acc.wall_cells);
    fmt::print(out, "free cells recovered: {:.2f}% of {}\n", 100 * acc.free_fraction(), acc.free_cells);
    fmt::print(out, "map: {0}.pgm {0}.yaml, trajectory: {1}\n", args.out.string(), traj_path.string());
    return kExitOk;
  });
}

// ---------------------------------------------------------------- mcl

int cmd_mcl(const MclArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (args.trials < 1) throw HarnessError(HarnessErrorCode::Usage, "--trials must be positive");
    if (args.particles < 1) throw HarnessError(HarnessErrorCode::Usage, "--particles must be positive");
    auto world = sim::load_world(args.world);
    OccupancyGrid map = args.map ? slam::load_map(*args.map)
                                 : sim::rasterize_world(world, 0.05, args.start.translation());
    const Pose2D map_in_world = args.map ? args.start : Pose2D{};
    MclOptions opts;
    opts.particles = args.particles;
    const MclSetup setup(std::move(world), std::move(map), map_in_world, opts.sensor);

    std::optional<std::ofstream> csv;
    if (args.out) {
      csv = open_output(*args.out);
      *csv << "trial,seed,true_x,true_y,true_theta,est_x,est_y,est_theta,position_error,"
              "heading_error_deg,converged\n";
    }
    std::vector<double> pos, head;
    int converged = 0;
    for (int i = 0; i < args.trials; ++i) {
      const std::uint64_t seed = args.seed + static_cast<std::uint64_t>(i);
      const MclTrial t = run_mcl_trial(setup, seed, opts);
      converged += t.converged;
      pos.push_back(t.position_error);
      head.push_back(rad_to_deg(t.heading_error));
      if (csv) {
        fmt::print(*csv, "{},{},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.4f},{}\n", i + 1,
                   seed, t.truth.x, t.truth.y, t.truth.theta, t.estimate.pose.x, t.estimate.pose.y,
                   t.estimate.pose.theta, t.position_error, head.back(), t.converged ? 1 : 0);
      }
    }
    auto median = [](std::vector<double> v) {
      std::sort(v.begin(), v.end());
      const std::size_t n = v.size();
      return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
    };
    auto mean = [](const std::vector<double>& v) {
      double s = 0.0;
      for (double x : v) s += x;
      return s / double(v.size());
    };
    fmt::print(out, "trials: {}, particles: {}, seeds {}..{}\n", args.trials, args.particles,
               args.seed, args.seed + static_cast<std::uint64_t>(args.trials - 1));
    fmt::print(out, "converged (0.1 m, 5 deg): {}/{} = {:.1f}%\n", converged, args.trials,
               100.0 * converged / args.trials);
    fmt::print(out, "position error: mean {:.4f} m, median {:.4f} m, max {:.4f} m\n", mean(pos),
               median(pos), *std::max_element(pos.begin(), pos.end()));
    fmt::print(out, "heading error: mean {:.3f} deg, median {:.3f} deg, max {:.3f} deg\n", mean(head),
               median(head), *std::max_element(head.begin(), head.end()));
    return kExitOk;
  });
}

// ---------------------------------------------------------------- sim

int cmd_sim(const SimArgs& args, std::ostream& out, std::ostream& err,
            const std::atomic<bool>* interrupt) {
  return guarded(err, [&] {
    constexpr double kDt = 0.01;
    if (!(args.rate > 0.0) || args.rate > 1.0 / kDt) {
      throw HarnessError(HarnessErrorCode::Usage, "--rate must be in (0, 100] Hz");
    }
    if (!(args.duration >= 0.0)) throw HarnessError(HarnessErrorCode::Usage, "--duration must be >= 0");
    const int steps_per_tick = std::max(1, static_cast<int>(std::lround(1.0 / (args.rate * kDt))));

    const RobotParams params;
    const sim::StabilityConfig stab;
    auto world = sim::load_world(args.world);
    std::optional<sim::ScriptedPath> script;
    if (args.path) script = sim::load_path(*args.path);

    sim::Simulator simulator(std::move(world), params, stab, sim::LidarSpec{}, args.seed, args.start);
    drivetrain::TickOdometry odom(params, args.start);
    odom.update(simulator.state().ticks_left, simulator.state().ticks_right);

    bus::TopicBus bus;
    teleop::Arbitrator arbitrator;
    std::atomic<double> sim_time{0.0};
    // wheel-speed bound on turning in place
    const double omega_max = 2.0 * params.v_max / params.track_width;
    bus.subscribe("/cmd_vel", [&](const bus::TopicMessage& m) {
      if (const auto* t = std::get_if<Twist2D>(&m.payload)) {
        arbitrator.submit(teleop::Source::Joystick,
                          teleop::joystick_to_twist(*t, params.v_max, omega_max), m.stamp);
      }
    });

    std::optional<bus::BagRecorder> recorder;
    if (args.log) {
      if (args.log->has_parent_path()) ensure_dir(args.log->parent_path());
      recorder.emplace(bus, *args.log);
    }
    std::optional<bus::WebSocketBridge> bridge;
    if (args.serve) {
      bus::BridgeOptions bo;
      bo.port = *args.serve;
      bo.clock = [&sim_time] { return sim_time.load(); };
      bridge.emplace(bus, bo);
      bridge->start();
      fmt::print(out, "serving on ws://127.0.0.1:{}\n", bridge->port());
      out.flush();
      if (args.on_serving) args.on_serving(bridge->port());
    }

    const auto wall_start = std::chrono::steady_clock::now();
    long long step = 0;
    std::size_t ticks = 0;
    bool unstable = false;
    auto stopped = [&] { return interrupt && interrupt->load(); };
    while (!stopped()) {
      const double t = simulator.state().time;
      if (args.duration > 0.0 && t >= args.duration - 1e-9) break;
      const bool tick = step % steps_per_tick == 0;

      if (tick && script) {
        if (auto cmd = script->command_at(t)) bus.publish("/cmd_vel", t, *cmd);
      }
      const teleop::Arbitration a = arbitrator.arbitrate(t);
      const Twist2D cmd = drivetrain::clamp_twist(a.cmd, params);
      const auto& s = simulator.advance(drivetrain::inverse_kinematics(cmd, params).speeds, kDt);
      sim_time.store(s.time);
      const Pose2D& pose = odom.update(s.ticks_left, s.ticks_right);
      unstable = unstable || !s.stability.stable();
      ++step;

      if (step % steps_per_tick == 0) {
        ++ticks;
        const double now = s.time;
        bus.publish("/odom", now, bus::OdometryMsg{pose, s.twist});
        bus.publish("/tf", now, bus::TransformMsg{"odom", "base_link", pose});
        ImuSample imu = sim::imu_from_state(s);
        imu.stamp = now;
        bus.publish("/imu/data_raw", now, imu);
        LaserScan scan = simulator.scan();
        scan.stamp = now;
        bus.publish("/scan", now, std::move(scan));
        bus.publish("/stability", now,
                    bus::StabilityMsg{s.twist.v, s.twist.omega, s.stability.lateral_accel,
                                      s.stability.tipping, s.stability.sliding});
      }
      if (!args.fast) {
        std::this_thread::sleep_until(wall_start + std::chrono::duration<double>(s.time));
      }
    }
    if (bridge) bridge->stop();

    const auto& s = simulator.state();
    fmt::print(out, "simulated {:.2f} s, {} ticks at {:.1f} Hz\n", s.time, ticks, args.rate);
    fmt::print(out, "final pose: x={:.4f} y={:.4f} theta={:.4f} (odometry x={:.4f} y={:.4f} theta={:.4f})\n",
               s.truth_pose.x, s.truth_pose.y, s.truth_pose.theta, odom.pose().x, odom.pose().y,
               odom.pose().theta);
    if (unstable) fmt::print(out, "stability limit exceeded during the run\n");
    if (recorder) {
      recorder->flush();
      fmt::print(out, "recorded {} messages to {}\n", recorder->count(), args.log->string());
    }
    return kExitOk;
  });
}

// ---------------------------------------------------------------- replay

int cmd_replay(const ReplayArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (!(args.rate > 0.0)) throw HarnessError(HarnessErrorCode::Usage, "--rate must be positive");
    const bus::Bag bag = bus::read_bag(args.bag);
    bus::TopicBus bus(bag.registry);
    std::optional<bus::BagRecorder> recorder;
    if (args.out) {
      if (args.out->has_parent_path()) ensure_dir(args.out->parent_path());
      recorder.emplace(bus, *args.out);
    }
    std::optional<bus::WebSocketBridge> bridge;
    if (args.serve) {
      bus::BridgeOptions bo;
      bo.port = *args.serve;
      bo.client_topics.clear();  // nothing to drive during playback
      bridge.emplace(bus, bo);
      bridge->start();
      fmt::print(out, "serving on ws://127.0.0.1:{}\n", bridge->port());
      out.flush();
    }
    const std::size_t n = bus::replay(bag, bus, {args.fast, args.rate});
    if (bridge) bridge->stop();
    fmt::print(out, "replayed {} messages on {} topics\n", n, bag.registry.topics().size());
    if (recorder) {
      recorder->flush();
      fmt::print(out, "recorded {} messages to {}\n", recorder->count(), args.out->string());
    }
    return kExitOk;
  });
}

}  // namespace romr::harness
