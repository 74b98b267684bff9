#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "aurcap/ontology/knowledge_base.hpp"

namespace aurcap::interfaces {

enum class InterfaceKind { Mqtt, Http, OpcUa };

std::string_view to_string(InterfaceKind kind) noexcept;
const Iri& interface_class(InterfaceKind kind);

// How a skill can be reached. OPC UA descriptors are descriptions only; no
// binding serves them.
struct Descriptor {
  Iri id;
  InterfaceKind kind = InterfaceKind::Mqtt;
  Iri skill;
  // MQTT
  std::string broker_uri;
  std::string command_topic;
  std::string state_topic;
  int qos = 1;
  // HTTP: resources live under {base_url}/skills/{skill}/
  std::string base_url;
  // OPC UA
  std::string endpoint_url;

  friend bool operator==(const Descriptor&, const Descriptor&) = default;
};

// Percent-encodes everything outside [A-Za-z0-9._~-]. Throws
// TopicEncodingError for an empty name.
std::string encode_segment(std::string_view local_name);
std::string decode_segment(std::string_view segment);

std::string command_topic(const Iri& robot, const Iri& skill);
std::string state_topic(const Iri& robot, const Iri& skill);
std::string rejected_topic(const Iri& robot, const Iri& skill);
// Derived from a command topic.
std::string rejected_topic(std::string_view command_topic);

Iri descriptor_id(const Iri& skill, InterfaceKind kind);
// Host robot of a registered skill. Throws UnknownSkill.
Iri host_of(const KnowledgeBase& kb, const Iri& skill);

Descriptor mqtt_descriptor(const KnowledgeBase& kb, const Iri& skill, std::string broker_uri);
Descriptor http_descriptor(const Iri& skill, std::string base_url);
Descriptor opcua_descriptor(const Iri& skill, std::string endpoint_url);

// Adds the descriptor individual, its class and endpoint literals, and the
// skill's accessibleThrough link. Replaces an earlier descriptor with the
// same id.
void write_descriptor(KnowledgeBase& kb, const Descriptor& d);
void remove_descriptor(KnowledgeBase& kb, const Descriptor& d);
std::vector<Descriptor> read_descriptors(const KnowledgeBase& kb, const Iri& skill);
// Turtle text holding only the skill's interface statements.
std::string describe_interfaces(const KnowledgeBase& kb, const Iri& skill);

}  // namespace aurcap::interfaces
