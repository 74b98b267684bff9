#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "aurcap/interfaces/descriptor.hpp"
#include "aurcap/net/broker.hpp"
#include "aurcap/net/wire.hpp"
#include "aurcap/skill/runtime.hpp"

namespace aurcap::interfaces {

// Serves one skill over MQTT: commands arrive on the command topic, every
// state change is published retained on the state topic, invalid or refused
// commands are answered on "<command topic>/rejected".
class MqttBinding {
 public:
  // Throws UnknownSkill, BrokerUnreachable, TopicEncodingError.
  MqttBinding(skill::SkillRuntime& runtime, KnowledgeBase& kb, const Iri& skill,
              std::shared_ptr<net::MessageBroker> broker);
  ~MqttBinding();
  MqttBinding(const MqttBinding&) = delete;
  MqttBinding& operator=(const MqttBinding&) = delete;

  const Descriptor& descriptor() const noexcept { return descriptor_; }
  // Blocks until every state change observed so far has been published.
  void flush(std::chrono::milliseconds timeout = std::chrono::milliseconds(2000));

 private:
  void on_command(const net::Message& m);
  void publish_states();

  skill::SkillRuntime& runtime_;
  std::shared_ptr<net::MessageBroker> broker_;
  Descriptor descriptor_;
  std::string rejected_topic_;
  std::shared_ptr<skill::StateStream> stream_;
  net::SubscriptionId subscription_ = 0;
  std::mutex mutex_;
  std::condition_variable cv_;
  std::optional<std::uint64_t> published_sequence_;
  std::thread publisher_;
};

std::unique_ptr<MqttBinding> bind_mqtt(skill::SkillRuntime& runtime, KnowledgeBase& kb, const Iri& skill,
                                       std::shared_ptr<net::MessageBroker> broker);
// Connects with connect_broker().
std::unique_ptr<MqttBinding> bind_mqtt(skill::SkillRuntime& runtime, KnowledgeBase& kb, const Iri& skill,
                                       const std::string& broker_uri);

// HTTP server exposing skills of one runtime under
// {base}/skills/{skill}/transitions/{command}, /state and /description.
class HttpSkillServer {
 public:
  // Port 0 picks an ephemeral port. Throws PortUnavailable.
  explicit HttpSkillServer(skill::SkillRuntime& runtime, std::string host = "127.0.0.1", std::uint16_t port = 0);
  ~HttpSkillServer();
  HttpSkillServer(const HttpSkillServer&) = delete;
  HttpSkillServer& operator=(const HttpSkillServer&) = delete;

  // Throws UnknownSkill, DuplicateId when another skill has the same local name.
  Descriptor bind(KnowledgeBase& kb, const Iri& skill);
  std::uint16_t port() const;
  std::string base_url() const;
  void stop();

  struct Impl;

 private:
  std::unique_ptr<Impl> impl_;
};

// WADL application document for one skill's resources.
std::string wadl_document(const std::string& base_url, const std::string& skill_segment);

struct RemoteOptions {
  std::chrono::milliseconds deadline{30000};
  std::chrono::milliseconds poll_interval{100};
  // MQTT only: reuse this connection instead of dialling the broker URI.
  std::shared_ptr<net::MessageBroker> broker;
};

// Handle on a command sent to a remote skill. States are yielded in
// sequence order, starting after the command's direct target.
class RemoteInvocation {
 public:
  virtual ~RemoteInvocation() = default;
  const std::string& correlation_id() const noexcept { return correlation_id_; }
  // State the command moved the skill to.
  const wire::StateMessage& initial() const noexcept { return initial_; }
  // State the skill was in just before, when the transport reported it.
  const std::optional<wire::StateMessage>& prior() const noexcept { return prior_; }
  // Next state change; nullopt when none arrives in time.
  virtual std::optional<wire::StateMessage> next(std::chrono::milliseconds timeout) = 0;
  // Follows next() until one of `states`; throws Timeout.
  wire::StateMessage wait_for(std::initializer_list<skill::SkillState> states, std::chrono::milliseconds timeout);

 protected:
  std::string correlation_id_;
  wire::StateMessage initial_;
  std::optional<wire::StateMessage> prior_;
};

// Generates a correlation id when the command carries none. Throws Timeout
// when the endpoint does not answer before the deadline, Rejected with the
// skill's reason when the command is refused, InvalidMessage for OPC UA
// descriptors.
std::unique_ptr<RemoteInvocation> invoke_remote(const Descriptor& descriptor, wire::CommandMessage command,
                                                const RemoteOptions& options = {});

}  // namespace aurcap::interfaces
