#include "romr/bus/topic_bus.hpp"

#include <algorithm>

#include <fmt/format.h>

namespace romr::bus {

std::uint16_t TopicRegistry::add(const std::string& name, Schema schema) {
  if (index_.count(name)) {
    throw BusError(BusErrorCode::DuplicateTopic, fmt::format("topic {} already registered", name));
  }
  if (topics_.size() > 0xFFFF) throw BusError(BusErrorCode::DuplicateTopic, "topic id space exhausted");
  const auto id = static_cast<std::uint16_t>(topics_.size());
  topics_.push_back({name, schema, id});
  index_[name] = id;
  return id;
}

const TopicInfo* TopicRegistry::find(const std::string& name) const {
  const auto it = index_.find(name);
  return it == index_.end() ? nullptr : &topics_[it->second];
}

const TopicInfo& TopicRegistry::by_name(const std::string& name) const {
  if (const TopicInfo* t = find(name)) return *t;
  throw BusError(BusErrorCode::UnknownTopic, fmt::format("topic {} is not registered", name));
}

const TopicInfo& TopicRegistry::by_id(std::uint16_t id) const {
  if (id < topics_.size()) return topics_[id];
  throw BusError(BusErrorCode::UnknownTopicId, fmt::format("no topic with id {}", id));
}

TopicRegistry standard_registry() {
  TopicRegistry r;
  r.add("/cmd_vel", Schema::Twist);
  r.add("/odom", Schema::Odometry);
  r.add("/scan", Schema::LaserScan);
  r.add("/imu/data_raw", Schema::Imu);
  r.add("/map", Schema::Map);
  r.add("/amcl_pose", Schema::PoseEstimate);
  r.add("/tf", Schema::Transform);
  r.add("/stability", Schema::Stability);
  return r;
}

TopicBus::TopicBus(TopicRegistry registry) : registry_(std::move(registry)) {
  for (std::size_t i = 0; i < registry_.topics().size(); ++i) {
    channels_.push_back(std::make_unique<Channel>());
  }
}

SubscriptionId TopicBus::subscribe(const std::string& topic, Callback cb) {
  const TopicInfo& info = registry_.by_name(topic);
  std::lock_guard lock(subs_mu_);
  const SubscriptionId id = next_id_++;
  channels_[info.id]->subs.push_back({id, std::make_shared<Callback>(std::move(cb))});
  return id;
}

SubscriptionId TopicBus::subscribe_all(Callback cb) {
  std::lock_guard lock(subs_mu_);
  const SubscriptionId id = next_id_++;
  all_.push_back({id, std::make_shared<Callback>(std::move(cb))});
  return id;
}

void TopicBus::unsubscribe(SubscriptionId id) {
  std::lock_guard lock(subs_mu_);
  auto drop = [id](std::vector<Sub>& v) {
    v.erase(std::remove_if(v.begin(), v.end(), [id](const Sub& s) { return s.id == id; }), v.end());
  };
  for (auto& ch : channels_) drop(ch->subs);
  drop(all_);
}

std::size_t TopicBus::publish(const std::string& topic, double stamp, Payload payload) {
  return publish(TopicMessage{topic, stamp, std::move(payload)});
}

std::size_t TopicBus::publish(const TopicMessage& msg) {
  const TopicInfo& info = registry_.by_name(msg.topic);
  if (schema_of(msg.payload) != info.schema) {
    throw BusError(BusErrorCode::SchemaMismatch,
                   fmt::format("{} carries {}, got {}", msg.topic, schema_name(info.schema),
                               schema_name(schema_of(msg.payload))));
  }
  Channel& ch = *channels_[info.id];
  std::lock_guard order(ch.delivery);
  std::vector<Sub> targets, all;
  {
    std::lock_guard lock(subs_mu_);
    targets = ch.subs;
    all = all_;
  }
  for (const Sub& s : targets) (*s.cb)(msg);
  for (const Sub& s : all) (*s.cb)(msg);
  return targets.size();
}

}  // namespace romr::bus
