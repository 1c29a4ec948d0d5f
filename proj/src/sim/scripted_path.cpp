#include "romr/sim/scripted_path.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include <fmt/format.h>

namespace romr::sim {

std::optional<Twist2D> ScriptedPath::command_at(double t) const {
  if (rows.size() < 2 || t < rows.front().t || t >= rows.back().t) return std::nullopt;
  auto it = std::upper_bound(rows.begin(), rows.end(), t,
                             [](double value, const PathRow& r) { return value < r.t; });
  return std::prev(it)->cmd;
}

ScriptedPath parse_path(std::istream& in, const std::string& source_name) {
  ScriptedPath path;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    double v[3];
    int n = 0;
    while (n < 3 && fields >> v[n]) ++n;
    if (n == 0 && fields.eof()) continue;
    std::string rest;
    if (n != 3 || (fields >> rest)) {
      throw WorldError(WorldErrorCode::Parse,
                       fmt::format("{}:{}: expected `t v omega`", source_name, line_no));
    }
    if (!std::isfinite(v[0]) || !std::isfinite(v[1]) || !std::isfinite(v[2])) {
      throw WorldError(WorldErrorCode::Parse,
                       fmt::format("{}:{}: non-finite value", source_name, line_no));
    }
    const bool first = path.rows.empty();
    if ((first && v[0] != 0.0) || (!first && !(v[0] > path.rows.back().t))) {
      throw WorldError(WorldErrorCode::Parse,
                       fmt::format("{}:{}: times must start at 0 and increase", source_name,
                                   line_no));
    }
    path.rows.push_back({v[0], {v[1], v[2]}});
  }
  return path;
}

ScriptedPath load_path(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw WorldError(WorldErrorCode::Io, "cannot open path file " + path.string());
  return parse_path(in, path.string());
}

}  // namespace romr::sim
