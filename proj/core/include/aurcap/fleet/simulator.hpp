#pragma once

#include <chrono>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "aurcap/capability.hpp"
#include "aurcap/interfaces/bindings.hpp"
#include "aurcap/property.hpp"
#include "aurcap/structure.hpp"

namespace aurcap::fleet {

enum class Outcome {
  Complete,      // runs for `duration` of wall time, suspended time included
  FailAt,        // first run throws after `fail_at`; later runs complete
  HonorSuspend,  // runs for `duration` of Execute time only
};

std::string_view to_string(Outcome o) noexcept;
std::optional<Outcome> outcome_from_string(std::string_view text) noexcept;

struct SkillScript {
  Iri skill;
  Iri capability;
  std::chrono::milliseconds duration{50};
  Outcome outcome = Outcome::Complete;
  std::chrono::milliseconds fail_at{0};
  std::vector<Iri> parameters;  // accepted Start parameter type descriptions
};

struct OwnedProperty {
  Iri owner;  // robot or capability
  property::InstanceDescription instance;
};

struct SimulatedRobot {
  structure::RobotDescription description;
  std::vector<capability::CapabilityDescription> capabilities;
  std::vector<OwnedProperty> properties;
  std::vector<SkillScript> skills;
};

struct FleetSpec {
  std::vector<property::TypeDescription> type_descriptions;
  std::vector<capability::CapabilityDescription> composites;  // provided by nobody
  std::vector<SimulatedRobot> robots;
};

// Rover1 (ground: navigate, grasp, release), Quadrocopter1 (air: fly up to
// 120 m, release) and Hexacopter2 (air: fly up to 100 m, 2.5 kg payload).
FleetSpec default_fleet();

// Writes robots, capabilities and properties; skills and interfaces are left
// to a running fleet. Parts already present in the KB are skipped, so
// describing onto a KB that loaded the same fleet description is a no-op.
void describe_fleet(KnowledgeBase& kb, const FleetSpec& spec);
// Turtle of what describe_fleet() adds to the seed, as shipped in fleet.ttl.
std::string fleet_turtle(const FleetSpec& spec);

struct FleetOptions {
  // Empty: a fresh named in-process broker.
  std::string broker_uri;
  bool http = true;
  std::string http_host = "127.0.0.1";
};

// Registers the fleet into `kb`, hosts the scripted skills and serves them
// over MQTT and HTTP until shutdown.
class SimulatedFleet {
 public:
  // Throws BrokerUnreachable.
  SimulatedFleet(KnowledgeBase& kb, FleetSpec spec, FleetOptions options = {});
  ~SimulatedFleet();
  SimulatedFleet(const SimulatedFleet&) = delete;
  SimulatedFleet& operator=(const SimulatedFleet&) = delete;

  // Closes every interface, clears retained state topics and removes the
  // interface descriptors from the KB.
  void shutdown();

  skill::SkillRuntime& runtime() { return *runtime_; }
  const std::shared_ptr<net::MessageBroker>& broker() const { return broker_; }
  std::string broker_uri() const { return broker_->uri(); }
  std::string http_base_url() const;
  std::vector<Iri> skills() const;
  std::vector<interfaces::Descriptor> descriptors() const;
  const FleetSpec& spec() const { return spec_; }

 private:
  KnowledgeBase& kb_;
  FleetSpec spec_;
  std::shared_ptr<net::MessageBroker> broker_;
  std::unique_ptr<skill::SkillRuntime> runtime_;
  std::vector<std::unique_ptr<interfaces::MqttBinding>> mqtt_;
  std::unique_ptr<interfaces::HttpSkillServer> http_;
  std::vector<interfaces::Descriptor> descriptors_;
  bool down_ = false;
};

}  // namespace aurcap::fleet
