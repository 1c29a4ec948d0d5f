#include "romr/bus/json_codec.hpp"

#include <cmath>

#include <fmt/format.h>

namespace romr::bus {

namespace {

Json num(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

[[noreturn]] void bad(const std::string& why) { throw BusError(BusErrorCode::Protocol, why); }

double get_num(const Json& j, const char* key, bool null_is_inf = false) {
  if (!j.is_object() || !j.contains(key)) bad(fmt::format("missing field '{}'", key));
  const Json& v = j.at(key);
  if (v.is_null() && null_is_inf) return kNoReturn;
  if (!v.is_number()) bad(fmt::format("field '{}' must be a number", key));
  return v.get<double>();
}

bool get_bool(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key) || !j.at(key).is_boolean()) {
    bad(fmt::format("field '{}' must be a boolean", key));
  }
  return j.at(key).get<bool>();
}

std::string get_str(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key) || !j.at(key).is_string()) {
    bad(fmt::format("field '{}' must be a string", key));
  }
  return j.at(key).get<std::string>();
}

const Json& get_array(const Json& j, const char* key, std::size_t n = 0) {
  if (!j.is_object() || !j.contains(key) || !j.at(key).is_array()) {
    bad(fmt::format("field '{}' must be an array", key));
  }
  const Json& a = j.at(key);
  if (n && a.size() != n) bad(fmt::format("field '{}' needs {} entries", key, n));
  return a;
}

double elem(const Json& a, std::size_t i, const char* key, bool null_is_inf = false) {
  if (a[i].is_null() && null_is_inf) return kNoReturn;
  if (!a[i].is_number()) bad(fmt::format("field '{}' holds a non-number", key));
  return a[i].get<double>();
}

Json pose_json(const Pose2D& p) { return {{"x", num(p.x)}, {"y", num(p.y)}, {"theta", num(p.theta)}}; }

Pose2D pose_from(const Json& j) {
  Pose2D p;
  p.x = get_num(j, "x");
  p.y = get_num(j, "y");
  p.theta = normalize_angle(get_num(j, "theta"));
  return p;
}

Json vec3_json(const Vec3& v) { return Json::array({num(v.x()), num(v.y()), num(v.z())}); }

Vec3 vec3_from(const Json& j, const char* key) {
  const Json& a = get_array(j, key, 3);
  return {elem(a, 0, key), elem(a, 1, key), elem(a, 2, key)};
}

struct ToJson {
  Json operator()(const Twist2D& t) const { return {{"v", num(t.v)}, {"omega", num(t.omega)}}; }
  Json operator()(const OdometryMsg& m) const {
    Json j = pose_json(m.pose);
    j["v"] = num(m.twist.v);
    j["omega"] = num(m.twist.omega);
    return j;
  }
  Json operator()(const LaserScan& s) const {
    Json ranges = Json::array();
    for (double r : s.ranges) ranges.push_back(num(r));
    return {{"angle_min", num(s.angle_min)},
            {"angle_max", num(s.angle_max)},
            {"angle_increment", num(s.angle_increment)},
            {"range_min", num(s.range_min)},
            {"range_max", num(s.range_max)},
            {"ranges", ranges}};
  }
  Json operator()(const ImuSample& s) const {
    return {{"accel", vec3_json(s.accel)}, {"gyro", vec3_json(s.gyro)}};
  }
  Json operator()(const MapMsg& m) const {
    return {{"width", m.width},
            {"height", m.height},
            {"resolution", num(m.resolution)},
            {"origin", pose_json(m.origin)},
            {"data", m.data}};
  }
  Json operator()(const PoseEstimateMsg& m) const {
    Json j = pose_json(m.pose);
    Json cov = Json::array();
    for (double c : m.covariance) cov.push_back(num(c));
    j["covariance"] = cov;
    return j;
  }
  Json operator()(const TransformMsg& m) const {
    Json j = pose_json(m.pose);
    j["parent"] = m.parent;
    j["child"] = m.child;
    return j;
  }
  Json operator()(const StabilityMsg& m) const {
    return {{"v", num(m.v)},
            {"omega", num(m.omega)},
            {"lateral_accel", num(m.lateral_accel)},
            {"tipping", m.tipping},
            {"sliding", m.sliding}};
  }
};

}  // namespace

Json payload_to_json(const Payload& p) { return std::visit(ToJson{}, p); }

Payload payload_from_json(const Json& j, Schema schema) {
  if (!j.is_object()) bad("msg must be an object");
  switch (schema) {
    case Schema::Twist:
      return Twist2D{get_num(j, "v"), get_num(j, "omega")};
    case Schema::Odometry:
      return OdometryMsg{pose_from(j), {get_num(j, "v"), get_num(j, "omega")}};
    case Schema::LaserScan: {
      LaserScan s;
      s.angle_min = get_num(j, "angle_min");
      s.angle_max = get_num(j, "angle_max");
      s.angle_increment = get_num(j, "angle_increment");
      s.range_min = get_num(j, "range_min");
      s.range_max = get_num(j, "range_max");
      const Json& r = get_array(j, "ranges");
      for (std::size_t i = 0; i < r.size(); ++i) s.ranges.push_back(elem(r, i, "ranges", true));
      return s;
    }
    case Schema::Imu: {
      ImuSample s;
      s.accel = vec3_from(j, "accel");
      s.gyro = vec3_from(j, "gyro");
      return s;
    }
    case Schema::Map: {
      MapMsg m;
      m.width = static_cast<std::uint32_t>(get_num(j, "width"));
      m.height = static_cast<std::uint32_t>(get_num(j, "height"));
      m.resolution = get_num(j, "resolution");
      if (!j.contains("origin")) bad("missing field 'origin'");
      m.origin = pose_from(j.at("origin"));
      const Json& d = get_array(j, "data", std::size_t(m.width) * m.height);
      for (const Json& c : d) {
        if (!c.is_number_integer() || c.get<int>() < -1 || c.get<int>() > 100) bad("map cell out of range");
        m.data.push_back(static_cast<std::int8_t>(c.get<int>()));
      }
      return m;
    }
    case Schema::PoseEstimate: {
      PoseEstimateMsg m;
      m.pose = pose_from(j);
      const Json& c = get_array(j, "covariance", 9);
      for (std::size_t i = 0; i < 9; ++i) m.covariance[i] = elem(c, i, "covariance");
      return m;
    }
    case Schema::Transform:
      return TransformMsg{get_str(j, "parent"), get_str(j, "child"), pose_from(j)};
    case Schema::Stability:
      return StabilityMsg{get_num(j, "v"), get_num(j, "omega"), get_num(j, "lateral_accel"),
                          get_bool(j, "tipping"), get_bool(j, "sliding")};
  }
  bad("unknown schema");
}

std::string server_message(const TopicMessage& m) {
  return Json{{"topic", m.topic}, {"stamp", num(m.stamp)}, {"msg", payload_to_json(m.payload)}}.dump();
}

ClientRequest parse_client_request(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    bad(fmt::format("malformed JSON: {}", e.what()));
  }
  if (!j.is_object()) bad("request must be a JSON object");
  ClientRequest req;
  const std::string op = get_str(j, "op");
  if (op == "subscribe") {
    req.op = ClientRequest::Op::Subscribe;
  } else if (op == "publish") {
    req.op = ClientRequest::Op::Publish;
    if (!j.contains("msg") || !j.at("msg").is_object()) bad("publish needs an object 'msg'");
    req.msg = j.at("msg");
  } else {
    bad(fmt::format("unknown op '{}'", op));
  }
  req.topic = get_str(j, "topic");
  return req;
}

std::string error_message(std::string_view what) {
  return Json{{"op", "error"}, {"error", what}}.dump();
}

}  // namespace romr::bus
