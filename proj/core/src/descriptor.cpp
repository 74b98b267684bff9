#include "aurcap/interfaces/descriptor.hpp"

#include <fmt/format.h>

#include <algorithm>

#include "aurcap/error.hpp"
#include "aurcap/ontology/namespaces.hpp"
#include "aurcap/ontology/turtle.hpp"

namespace aurcap::interfaces {

namespace {

bool unreserved(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '.' || c == '_' ||
         c == '~' || c == '-';
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  return -1;
}

std::string topic_base(const Iri& robot, const Iri& skill) {
  return "aur/robots/" + encode_segment(robot.local_name()) + "/skills/" + encode_segment(skill.local_name());
}

std::string text_of(const KnowledgeBase& kb, const Iri& s, const Iri& p) {
  const auto v = kb.value(s, p);
  return v ? v->lexical() : std::string{};
}

}  // namespace

std::string_view to_string(InterfaceKind kind) noexcept {
  switch (kind) {
    case InterfaceKind::Mqtt:
      return "mqtt";
    case InterfaceKind::Http:
      return "http";
    case InterfaceKind::OpcUa:
      return "opcua";
  }
  return "?";
}

const Iri& interface_class(InterfaceKind kind) {
  switch (kind) {
    case InterfaceKind::Mqtt:
      return vocab::MQTTSkillInterface;
    case InterfaceKind::Http:
      return vocab::HTTPSkillInterface;
    case InterfaceKind::OpcUa:
      break;
  }
  return vocab::OPCUASkillInterface;
}

std::string encode_segment(std::string_view local_name) {
  if (local_name.empty()) throw Error(Errc::TopicEncodingError, "empty local name");
  std::string out;
  for (const char c : local_name) {
    if (unreserved(c))
      out.push_back(c);
    else
      out += fmt::format("%{:02X}", static_cast<unsigned char>(c));
  }
  return out;
}

std::string decode_segment(std::string_view segment) {
  std::string out;
  for (std::size_t i = 0; i < segment.size(); ++i) {
    if (segment[i] == '%' && i + 2 < segment.size()) {
      const int hi = hex_value(segment[i + 1]), lo = hex_value(segment[i + 2]);
      if (hi >= 0 && lo >= 0) {
        out.push_back(static_cast<char>(hi * 16 + lo));
        i += 2;
        continue;
      }
    }
    out.push_back(segment[i]);
  }
  return out;
}

std::string command_topic(const Iri& robot, const Iri& skill) { return topic_base(robot, skill) + "/cmd"; }
std::string state_topic(const Iri& robot, const Iri& skill) { return topic_base(robot, skill) + "/state"; }
std::string rejected_topic(const Iri& robot, const Iri& skill) { return topic_base(robot, skill) + "/cmd/rejected"; }
std::string rejected_topic(std::string_view command_topic) { return std::string(command_topic) + "/rejected"; }

Iri descriptor_id(const Iri& skill, InterfaceKind kind) { return skill.with_suffix(fmt::format("_{}", to_string(kind))); }

Iri host_of(const KnowledgeBase& kb, const Iri& skill) {
  auto host = kb.object(skill, vocab::hostedOn);
  if (!host) throw Error(Errc::UnknownSkill, skill.str() + " is not a registered skill");
  return *host;
}

Descriptor mqtt_descriptor(const KnowledgeBase& kb, const Iri& skill, std::string broker_uri) {
  const auto robot = host_of(kb, skill);
  Descriptor d;
  d.id = descriptor_id(skill, InterfaceKind::Mqtt);
  d.kind = InterfaceKind::Mqtt;
  d.skill = skill;
  d.broker_uri = std::move(broker_uri);
  d.command_topic = command_topic(robot, skill);
  d.state_topic = state_topic(robot, skill);
  d.qos = 1;
  return d;
}

Descriptor http_descriptor(const Iri& skill, std::string base_url) {
  while (!base_url.empty() && base_url.back() == '/') base_url.pop_back();
  Descriptor d;
  d.id = descriptor_id(skill, InterfaceKind::Http);
  d.kind = InterfaceKind::Http;
  d.skill = skill;
  d.base_url = std::move(base_url);
  return d;
}

Descriptor opcua_descriptor(const Iri& skill, std::string endpoint_url) {
  Descriptor d;
  d.id = descriptor_id(skill, InterfaceKind::OpcUa);
  d.kind = InterfaceKind::OpcUa;
  d.skill = skill;
  d.endpoint_url = std::move(endpoint_url);
  return d;
}

void write_descriptor(KnowledgeBase& kb, const Descriptor& d) {
  remove_descriptor(kb, d);
  kb.add_type(d.id, interface_class(d.kind));
  kb.add_link(d.skill, vocab::accessibleThrough, d.id);
  switch (d.kind) {
    case InterfaceKind::Mqtt:
      kb.add_value(d.id, vocab::brokerUri, Literal::string(d.broker_uri));
      kb.add_value(d.id, vocab::commandTopic, Literal::string(d.command_topic));
      kb.add_value(d.id, vocab::stateTopic, Literal::string(d.state_topic));
      kb.add_value(d.id, vocab::qos, Literal::integer(d.qos));
      break;
    case InterfaceKind::Http:
      kb.add_value(d.id, vocab::baseUrl, Literal::string(d.base_url));
      break;
    case InterfaceKind::OpcUa:
      kb.add_value(d.id, vocab::endpointUrl, Literal::string(d.endpoint_url));
      break;
  }
}

void remove_descriptor(KnowledgeBase& kb, const Descriptor& d) {
  for (const auto& p : {vocab::brokerUri, vocab::commandTopic, vocab::stateTopic, vocab::qos, vocab::baseUrl,
                        vocab::endpointUrl})
    kb.remove_links(d.id, p);
  for (const auto& cls : kb.asserted_types(d.id)) kb.remove(ClassAssertion{d.id, cls});
  kb.remove(ObjectLink{d.skill, vocab::accessibleThrough, d.id});
}

std::vector<Descriptor> read_descriptors(const KnowledgeBase& kb, const Iri& skill) {
  std::vector<Descriptor> out;
  for (const auto& id : kb.objects(skill, vocab::accessibleThrough)) {
    const auto types = kb.asserted_types(id);
    const auto has = [&](const Iri& c) { return std::find(types.begin(), types.end(), c) != types.end(); };
    Descriptor d;
    d.id = id;
    d.skill = skill;
    if (has(vocab::MQTTSkillInterface) || has(vocab::MQTTClient)) {
      d.kind = InterfaceKind::Mqtt;
      d.broker_uri = text_of(kb, id, vocab::brokerUri);
      d.command_topic = text_of(kb, id, vocab::commandTopic);
      d.state_topic = text_of(kb, id, vocab::stateTopic);
      if (auto q = kb.value(id, vocab::qos); q && q->is_numeric()) d.qos = static_cast<int>(q->as_double());
    } else if (has(vocab::HTTPSkillInterface)) {
      d.kind = InterfaceKind::Http;
      d.base_url = text_of(kb, id, vocab::baseUrl);
    } else if (has(vocab::OPCUASkillInterface)) {
      d.kind = InterfaceKind::OpcUa;
      d.endpoint_url = text_of(kb, id, vocab::endpointUrl);
    } else {
      continue;
    }
    out.push_back(std::move(d));
  }
  return out;
}

std::string describe_interfaces(const KnowledgeBase& kb, const Iri& skill) {
  KnowledgeBase fragment;
  for (const auto& [name, ns] : kb.prefixes()) fragment.set_prefix(name, ns);
  for (const auto& d : read_descriptors(kb, skill)) write_descriptor(fragment, d);
  return serialize_turtle(fragment);
}

}  // namespace aurcap::interfaces
