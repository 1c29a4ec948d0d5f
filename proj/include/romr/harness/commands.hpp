#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "romr/core/geometry.hpp"
#include "romr/harness/config.hpp"
#include "romr/sim/stability.hpp"

namespace romr::harness {

// Exit codes shared by every command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitMismatch = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitConfig = 4;
inline constexpr int kExitUsage = 64;

struct StabilityArgs {
  std::optional<std::filesystem::path> config;  // default: the built-in twelve rows
  std::filesystem::path out = "stability";
  std::optional<std::filesystem::path> expect;
  double revolutions = 1.0;
};

struct StabilityOutcome {
  StabilityCase run;
  sim::StabilityAssessment worst;
  bool unstable = false;
  std::string csv;  // file name inside the output directory

  const char* classification() const { return unstable ? "unstable" : "stable"; }
};

/// Drives every case, writing row_NN.csv into `out_dir`.
std::vector<StabilityOutcome> run_stability(const std::vector<StabilityCase>& cases,
                                            const std::filesystem::path& out_dir,
                                            double revolutions = 1.0);

void write_stability_summary(std::ostream& out, const std::vector<StabilityOutcome>& rows);

int cmd_stability(const StabilityArgs& args, std::ostream& out, std::ostream& err);

struct SlamArgs {
  std::filesystem::path world;
  std::filesystem::path path;
  std::filesystem::path out = "map";
  Pose2D start;
  std::uint64_t seed = 1;
};

/// Writes <out>.pgm, <out>.yaml and <out>_trajectory.csv.
int cmd_slam(const SlamArgs& args, std::ostream& out, std::ostream& err);

struct MclArgs {
  std::optional<std::filesystem::path> map;  // default: the world rasterised at 5 cm
  std::filesystem::path world;
  Pose2D start;  // map origin in the world (the mapping run's start pose)
  int trials = 50;
  std::uint64_t seed = 1;
  std::size_t particles = 500;
  std::optional<std::filesystem::path> out;  // per-trial CSV
};

int cmd_mcl(const MclArgs& args, std::ostream& out, std::ostream& err);

struct SimArgs {
  std::filesystem::path world;
  double rate = 10.0;  // Hz for every published topic
  std::uint64_t seed = 1;
  std::optional<std::uint16_t> serve;
  double duration = 10.0;  // s of simulated time; 0 runs until interrupted
  bool fast = false;       // do not pace against the wall clock
  std::optional<std::filesystem::path> log;   // bag of all bus traffic
  std::optional<std::filesystem::path> path;  // scripted /cmd_vel source
  Pose2D start;
  std::function<void(std::uint16_t)> on_serving;  // called with the bound port
};

/// `interrupt`, when given, is polled every step.
int cmd_sim(const SimArgs& args, std::ostream& out, std::ostream& err,
            const std::atomic<bool>* interrupt = nullptr);

struct ReplayArgs {
  std::filesystem::path bag;
  bool fast = false;
  double rate = 1.0;
  std::optional<std::filesystem::path> out;  // record the replayed traffic again
  std::optional<std::uint16_t> serve;
};

int cmd_replay(const ReplayArgs& args, std::ostream& out, std::ostream& err);

}  // namespace romr::harness
