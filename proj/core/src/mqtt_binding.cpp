#include <json.hpp>
#include <spdlog/spdlog.h>

#include "aurcap/error.hpp"
#include "aurcap/interfaces/bindings.hpp"
#include "aurcap/net/mqtt_client.hpp"

namespace aurcap::interfaces {

namespace {

// Best effort, for echoing in the rejection of an otherwise invalid payload.
std::optional<std::string> loose_correlation(const std::string& payload) {
  const auto j = nlohmann::json::parse(payload, nullptr, false);
  if (j.is_object()) {
    const auto it = j.find("correlationId");
    if (it != j.end() && it->is_string()) return it->get<std::string>();
  }
  return std::nullopt;
}

}  // namespace

MqttBinding::MqttBinding(skill::SkillRuntime& runtime, KnowledgeBase& kb, const Iri& skill,
                         std::shared_ptr<net::MessageBroker> broker)
    : runtime_(runtime), broker_(std::move(broker)) {
  if (!runtime_.has(skill)) throw Error(Errc::UnknownSkill, skill.str() + " is not hosted by this runtime");
  if (!broker_) throw Error(Errc::BrokerUnreachable, "no broker");
  descriptor_ = mqtt_descriptor(kb, skill, broker_->uri());
  rejected_topic_ = rejected_topic(descriptor_.command_topic);
  stream_ = runtime_.observe(skill);
  publisher_ = std::thread([this] { publish_states(); });
  try {
    subscription_ = broker_->subscribe(descriptor_.command_topic, [this](const net::Message& m) { on_command(m); },
                                       descriptor_.qos);
  } catch (...) {
    stream_->close();
    publisher_.join();
    throw;
  }
  write_descriptor(kb, descriptor_);
}

MqttBinding::~MqttBinding() {
  try {
    broker_->unsubscribe(subscription_);
  } catch (const Error& e) {
    spdlog::debug("mqtt binding {}: {}", descriptor_.id.str(), e.what());
  }
  stream_->close();
  if (publisher_.joinable()) publisher_.join();
}

void MqttBinding::flush(std::chrono::milliseconds timeout) {
  const auto target = runtime_.current(descriptor_.skill).sequence;
  std::unique_lock lock(mutex_);
  cv_.wait_for(lock, timeout, [&] { return published_sequence_ && *published_sequence_ >= target; });
}

void MqttBinding::on_command(const net::Message& m) {
  wire::Rejection rejection;
  try {
    const auto cmd = wire::parse_command(m.payload);
    rejection.correlation_id = cmd.correlation_id;
    const auto result = runtime_.command(descriptor_.skill, cmd.command, wire::to_parameters(cmd.parameters),
                                         cmd.correlation_id.value_or(wire::new_uuid()));
    if (result.accepted) return;
    rejection.reason = result.reason;
  } catch (const Error& e) {
    if (!rejection.correlation_id) rejection.correlation_id = loose_correlation(m.payload);
    rejection.reason = e.detail();
  }
  try {
    broker_->publish({rejected_topic_, wire::to_json(rejection), descriptor_.qos, false});
  } catch (const Error& e) {
    spdlog::warn("mqtt binding {}: cannot publish rejection: {}", descriptor_.id.str(), e.what());
  }
}

void MqttBinding::publish_states() {
  while (true) {
    auto change = stream_->next(std::chrono::milliseconds(200));
    if (!change) {
      if (stream_->closed()) return;
      continue;
    }
    try {
      broker_->publish({descriptor_.state_topic, wire::to_json(wire::from_change(*change)), descriptor_.qos, true});
    } catch (const Error& e) {
      spdlog::warn("mqtt binding {}: cannot publish state: {}", descriptor_.id.str(), e.what());
    }
    {
      std::lock_guard lock(mutex_);
      published_sequence_ = change->sequence;
    }
    cv_.notify_all();
  }
}

std::unique_ptr<MqttBinding> bind_mqtt(skill::SkillRuntime& runtime, KnowledgeBase& kb, const Iri& skill,
                                       std::shared_ptr<net::MessageBroker> broker) {
  return std::make_unique<MqttBinding>(runtime, kb, skill, std::move(broker));
}

std::unique_ptr<MqttBinding> bind_mqtt(skill::SkillRuntime& runtime, KnowledgeBase& kb, const Iri& skill,
                                       const std::string& broker_uri) {
  return bind_mqtt(runtime, kb, skill, net::connect_broker(broker_uri));
}

}  // namespace aurcap::interfaces
