#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "romr/core/geometry.hpp"
#include "romr/sim/world_map.hpp"

namespace romr::sim {

struct PathRow {
  double t = 0.0;
  Twist2D cmd;
};

/// Timed velocity script. Each row's command holds from its time until the
/// next row; the last row marks the end of the path.
struct ScriptedPath {
  std::vector<PathRow> rows;

  double duration() const { return rows.empty() ? 0.0 : rows.back().t; }
  /// nullopt once t reaches the end of the path.
  std::optional<Twist2D> command_at(double t) const;
};

/// `t v omega` per line, times strictly increasing from 0. Errors reuse the
/// world file codes.
ScriptedPath parse_path(std::istream& in, const std::string& source_name = "<stream>");
ScriptedPath load_path(const std::filesystem::path& path);

}  // namespace romr::sim
