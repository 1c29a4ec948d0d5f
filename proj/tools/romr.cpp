#include <atomic>
#include <csignal>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "romr/harness/commands.hpp"

namespace {

std::atomic<bool> g_interrupted{false};

extern "C" void on_sigint(int) { g_interrupted.store(true); }

using romr::harness::HarnessError;

romr::Pose2D pose_or_default(const std::string& text) {
  return text.empty() ? romr::Pose2D{} : romr::harness::parse_pose(text);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace romr::harness;
  CLI::App app{"romr: simulation, mapping, localisation and stability tools"};
  app.require_subcommand(1);

  // sim / record share everything but the bag
  SimArgs sim;
  std::string sim_start, sim_path;
  std::optional<std::uint16_t> serve;
  auto add_sim_options = [&](CLI::App* c) {
    c->add_option("--world", sim.world, "world file")->required();
    c->add_option("--rate", sim.rate, "publish rate, Hz");
    c->add_option("--seed", sim.seed, "random seed");
    c->add_option("--serve", serve, "serve the WebSocket bridge on this port");
    c->add_option("--duration", sim.duration, "simulated seconds, 0 = until interrupted");
    c->add_flag("--fast", sim.fast, "do not pace against the wall clock");
    c->add_option("--path", sim_path, "scripted /cmd_vel file (t v omega per line)");
    c->add_option("--start", sim_start, "start pose x,y,theta (m, m, rad)");
  };
  auto* sim_cmd = app.add_subcommand("sim", "run the simulator and publish its topics");
  add_sim_options(sim_cmd);
  std::string sim_log;
  sim_cmd->add_option("--log", sim_log, "also record all traffic to this bag");

  auto* record_cmd = app.add_subcommand("record", "run the simulator and record all traffic");
  add_sim_options(record_cmd);
  std::string record_bag;
  record_cmd->add_option("--bag", record_bag, "output bag")->required();

  StabilityArgs stab;
  std::string stab_config, stab_expect;
  auto* stab_cmd = app.add_subcommand("stability", "drive circular paths and classify stability");
  stab_cmd->add_option("--config", stab_config, "case file (default: built-in twelve rows)");
  stab_cmd->add_option("--out", stab.out, "output directory");
  stab_cmd->add_option("--expect", stab_expect, "expected classifications, one per row");
  stab_cmd->add_option("--revolutions", stab.revolutions, "revolutions per row")
      ->check(CLI::PositiveNumber);

  SlamArgs slam;
  std::string slam_start;
  auto* slam_cmd = app.add_subcommand("slam", "map a world along a scripted path");
  slam_cmd->add_option("--world", slam.world, "world file")->required();
  slam_cmd->add_option("--path", slam.path, "scripted path")->required();
  slam_cmd->add_option("--out", slam.out, "map basename");
  slam_cmd->add_option("--seed", slam.seed, "random seed");
  slam_cmd->add_option("--start", slam_start, "start pose x,y,theta (m, m, rad)");

  MclArgs mcl;
  std::string mcl_map, mcl_start, mcl_out;
  auto* mcl_cmd = app.add_subcommand("mcl", "global localisation trials");
  mcl_cmd->add_option("--map", mcl_map, "map basename (default: rasterised world)");
  mcl_cmd->add_option("--world", mcl.world, "world file")->required();
  mcl_cmd->add_option("--trials", mcl.trials, "number of trials");
  mcl_cmd->add_option("--seed", mcl.seed, "seed of the first trial");
  mcl_cmd->add_option("--particles", mcl.particles, "particles per filter");
  mcl_cmd->add_option("--start", mcl_start, "pose the map was started from, x,y,theta");
  mcl_cmd->add_option("--out", mcl_out, "per-trial CSV");

  ReplayArgs replay;
  std::string replay_out;
  auto* replay_cmd = app.add_subcommand("replay", "re-publish a recorded bag");
  replay_cmd->add_option("--bag", replay.bag, "input bag")->required();
  replay_cmd->add_flag("--as-fast-as-possible,--fast", replay.fast, "ignore recorded timing");
  replay_cmd->add_option("--rate", replay.rate, "playback speed factor");
  replay_cmd->add_option("--out", replay_out, "record the replayed traffic to this bag");
  replay_cmd->add_option("--serve", replay.serve, "serve the WebSocket bridge on this port");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*sim_cmd || *record_cmd) {
      sim.start = pose_or_default(sim_start);
      sim.serve = serve;
      if (!sim_path.empty()) sim.path = sim_path;
      if (*record_cmd) {
        sim.log = record_bag;
      } else if (!sim_log.empty()) {
        sim.log = sim_log;
      }
      std::signal(SIGINT, on_sigint);
      return cmd_sim(sim, std::cout, std::cerr, &g_interrupted);
    }
    if (*stab_cmd) {
      if (!stab_config.empty()) stab.config = stab_config;
      if (!stab_expect.empty()) stab.expect = stab_expect;
      return cmd_stability(stab, std::cout, std::cerr);
    }
    if (*slam_cmd) {
      slam.start = pose_or_default(slam_start);
      return cmd_slam(slam, std::cout, std::cerr);
    }
    if (*mcl_cmd) {
      mcl.start = pose_or_default(mcl_start);
      if (!mcl_map.empty()) mcl.map = mcl_map;
      if (!mcl_out.empty()) mcl.out = mcl_out;
      return cmd_mcl(mcl, std::cout, std::cerr);
    }
    if (*replay_cmd) {
      if (!replay_out.empty()) replay.out = replay_out;
      return cmd_replay(replay, std::cout, std::cerr);
    }
  } catch (const HarnessError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
