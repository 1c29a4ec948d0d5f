#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "romr/bus/messages.hpp"

namespace romr::bus {

struct TopicInfo {
  std::string name;
  Schema schema;
  std::uint16_t id;
  bool operator==(const TopicInfo&) const = default;
};

/// Topic name -> schema. Ids follow registration order from 0.
class TopicRegistry {
 public:
  /// Throws DuplicateTopic when the name is taken.
  std::uint16_t add(const std::string& name, Schema schema);

  const TopicInfo& by_name(const std::string& name) const;  // throws UnknownTopic
  const TopicInfo& by_id(std::uint16_t id) const;           // throws UnknownTopicId
  const TopicInfo* find(const std::string& name) const;
  const std::vector<TopicInfo>& topics() const { return topics_; }

  bool operator==(const TopicRegistry& o) const { return topics_ == o.topics_; }

 private:
  std::vector<TopicInfo> topics_;
  std::map<std::string, std::uint16_t> index_;
};

/// /cmd_vel /odom /scan /imu/data_raw /map /amcl_pose /tf /stability, in that order.
TopicRegistry standard_registry();

using Callback = std::function<void(const TopicMessage&)>;
using SubscriptionId = std::uint64_t;

/// Synchronous fan-out on the publisher's thread. Publishers on one topic are
/// serialised so every subscriber sees that topic in publish order.
class TopicBus {
 public:
  explicit TopicBus(TopicRegistry registry = standard_registry());

  const TopicRegistry& registry() const { return registry_; }

  SubscriptionId subscribe(const std::string& topic, Callback cb);
  /// Receives every topic, after that topic's own subscribers.
  SubscriptionId subscribe_all(Callback cb);
  void unsubscribe(SubscriptionId id);

  /// Returns the number of subscribers reached (catch-all ones excluded).
  std::size_t publish(const std::string& topic, double stamp, Payload payload);
  std::size_t publish(const TopicMessage& msg);

 private:
  struct Sub {
    SubscriptionId id;
    std::shared_ptr<Callback> cb;
  };
  struct Channel {
    std::recursive_mutex delivery;
    std::vector<Sub> subs;
  };

  TopicRegistry registry_;
  std::vector<std::unique_ptr<Channel>> channels_;  // by topic id
  std::vector<Sub> all_;
  mutable std::mutex subs_mu_;
  SubscriptionId next_id_ = 1;
};

}  // namespace romr::bus
