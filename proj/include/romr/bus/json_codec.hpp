#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "romr/bus/messages.hpp"

namespace romr::bus {

using Json = nlohmann::json;

/// Field names and units of the UI protocol. Infinite or NaN values travel
/// as null (JSON has no infinities); null ranges read back as no-return.
Json payload_to_json(const Payload& p);

/// Throws BusError(Protocol) on missing or mistyped fields.
Payload payload_from_json(const Json& j, Schema schema);

/// {"topic": ..., "stamp": ..., "msg": {...}} as sent to UI clients.
std::string server_message(const TopicMessage& m);

struct ClientRequest {
  enum class Op { Subscribe, Publish };
  Op op = Op::Subscribe;
  std::string topic;
  Json msg;  // null for subscribe
};

/// Parses one client text message; throws BusError(Protocol).
ClientRequest parse_client_request(std::string_view text);

std::string error_message(std::string_view what);

}  // namespace romr::bus
