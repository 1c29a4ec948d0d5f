#include "romr/harness/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <fmt/format.h>

namespace romr::harness {

namespace {

std::string strip_comment(const std::string& line) {
  const auto hash = line.find('#');
  return hash == std::string::npos ? line : line.substr(0, hash);
}

bool parse_double(std::string_view s, double& out) {
  const char* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && p == end && std::isfinite(out);
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw HarnessError(HarnessErrorCode::Io, "cannot open " + path.string());
  return in;
}

}  // namespace

sim::StabilityConfig StabilityCase::stability_config() const {
  sim::StabilityConfig cfg;
  cfg.payload_mass = payload;
  cfg.payload_pos = pcog;
  return cfg;
}

std::vector<StabilityCase> parse_stability_config(std::istream& in, const std::string& name,
                                                  const RobotParams& params) {
  std::vector<StabilityCase> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream fields(strip_comment(line));
    std::map<std::string, double> kv;
    std::string field;
    auto fail = [&](const std::string& why) {
      throw HarnessError(HarnessErrorCode::Parse, fmt::format("{}:{}: {}", name, lineno, why));
    };
    while (fields >> field) {
      const auto eq = field.find('=');
      if (eq == std::string::npos) fail(fmt::format("expected key=value, got '{}'", field));
      const std::string key = field.substr(0, eq);
      if (key != "vel" && key != "payload" && key != "pcog" && key != "radius") {
        fail(fmt::format("unknown key '{}'", key));
      }
      double value = 0;
      if (!parse_double(std::string_view(field).substr(eq + 1), value)) {
        fail(fmt::format("'{}' is not a number", field.substr(eq + 1)));
      }
      if (!kv.emplace(key, value).second) fail(fmt::format("key '{}' given twice", key));
    }
    if (kv.empty()) continue;
    if (!kv.count("vel")) fail("missing key 'vel'");
    if (!kv.count("radius")) fail("missing key 'radius'");
    StabilityCase c{kv["vel"], kv.count("payload") ? kv["payload"] : 0.0,
                    kv.count("pcog") ? kv["pcog"] : 0.0, kv["radius"], lineno};
    if (!(c.vel > 0)) fail("vel must be positive");
    if (!(c.radius > 0)) fail("radius must be positive");
    try {
      c.stability_config().validate(params);
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
    rows.push_back(c);
  }
  return rows;
}

std::vector<StabilityCase> load_stability_config(const std::filesystem::path& path,
                                                 const RobotParams& params) {
  auto in = open_or_throw(path);
  return parse_stability_config(in, path.string(), params);
}

std::vector<StabilityCase> default_stability_cases() {
  return {
      {0.5, 0.0, 0.0, 0.5},  {0.5, 25.0, 0.1, 1.0}, {0.5, 85.0, -0.1, 1.5},
      {1.0, 0.0, 0.0, 2.0},  {1.0, 25.0, 0.1, 2.5}, {1.0, 85.0, -0.1, 1.5},
      {1.5, 25.0, -0.1, 1.0}, {1.5, 85.0, 0.1, 2.5}, {1.5, 0.0, 0.0, 1.5},
      {2.5, 25.0, -0.1, 1.5}, {2.5, 85.0, 0.1, 2.5}, {2.5, 0.0, 0.0, 0.5},
  };
}

std::vector<std::string> parse_expectations(std::istream& in, const std::string& name) {
  std::vector<std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream fields(strip_comment(line));
    std::string word, extra;
    if (!(fields >> word)) continue;
    if (fields >> extra || (word != "stable" && word != "unstable")) {
      throw HarnessError(HarnessErrorCode::Parse,
                         fmt::format("{}:{}: expected 'stable' or 'unstable'", name, lineno));
    }
    out.push_back(word);
  }
  return out;
}

std::vector<std::string> load_expectations(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  return parse_expectations(in, path.string());
}

Pose2D parse_pose(std::string_view text) {
  double v[3];
  std::size_t start = 0;
  for (int i = 0; i < 3; ++i) {
    const std::size_t comma = text.find(',', start);
    const bool last = i == 2;
    if (last != (comma == std::string_view::npos)) break;
    const auto part = text.substr(start, last ? std::string_view::npos : comma - start);
    if (!parse_double(part, v[i])) break;
    if (last) return Pose2D(v[0], v[1], v[2]);
    start = comma + 1;
  }
  throw HarnessError(HarnessErrorCode::Usage,
                     fmt::format("pose '{}' is not x,y,theta", std::string(text)));
}

}  // namespace romr::harness
