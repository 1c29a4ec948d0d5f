#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "romr/core/error.hpp"
#include "romr/core/geometry.hpp"
#include "romr/core/robot_params.hpp"
#include "romr/sim/stability.hpp"

namespace romr::harness {

enum class HarnessErrorCode { Io, Parse, Usage };

using HarnessError = CodedError<HarnessErrorCode>;

/// One stability run: drive a circle of `radius` at `vel` with `payload` kg
/// placed `pcog` m ahead of the base midpoint (0 kg = robot weight only).
struct StabilityCase {
  double vel = 0.0;
  double payload = 0.0;
  double pcog = 0.0;
  double radius = 0.0;
  int line = 0;  // source line, 0 for built-in rows

  sim::StabilityConfig stability_config() const;
};

/// Rows of `key=value` pairs separated by spaces; keys vel, radius (both
/// required), payload, pcog. '#' starts a comment. Throws HarnessError(Parse)
/// with "name:line:" on anything else.
std::vector<StabilityCase> parse_stability_config(std::istream& in, const std::string& name,
                                                  const RobotParams& params = {});
std::vector<StabilityCase> load_stability_config(const std::filesystem::path& path,
                                                 const RobotParams& params = {});

/// The twelve reference circular-path runs.
std::vector<StabilityCase> default_stability_cases();

/// One classification ("stable" / "unstable") per non-comment line.
std::vector<std::string> parse_expectations(std::istream& in, const std::string& name);
std::vector<std::string> load_expectations(const std::filesystem::path& path);

/// "x,y,theta" in metres and radians.
Pose2D parse_pose(std::string_view text);

}  // namespace romr::harness
