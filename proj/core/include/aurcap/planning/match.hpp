#pragma once

#include <vector>

#include "aurcap/capability.hpp"
#include "aurcap/interfaces/descriptor.hpp"
#include "aurcap/property.hpp"

namespace aurcap::planning {

struct RequiredCapability {
  Iri capability_type;
  capability::KindCounts required_inputs;   // what the requester can feed in
  capability::KindCounts required_outputs;  // what it needs back
  std::vector<property::InstanceDescription> requirements;  // role Requirement

  friend bool operator==(const RequiredCapability&, const RequiredCapability&) = default;
};

struct Match {
  Iri robot;
  Iri capability;
  Iri skill;
  // Assurances on the capability and robot that satisfy no requirement.
  std::size_t unused_assurances = 0;
  // Live interfaces of the skill (MQTT and HTTP), MQTT first.
  std::vector<interfaces::Descriptor> interfaces;

  friend bool operator==(const Match&, const Match&) = default;
};

// Multiset inclusion per kind.
bool kinds_included(const capability::KindCounts& inner, const capability::KindCounts& outer);

// All (robot, capability, skill) triples where the capability's type is
// subsumed by the required type, the signature fits, every requirement is
// met by an assurance or actual value on the capability or the robot, and
// the skill runs on that robot with a live interface. Ordered by
// unused_assurances, then robot, capability and skill IRI. Reads the KB only.
// Throws UnknownCapabilityType, UnknownTypeDescription.
std::vector<Match> match(const KnowledgeBase& kb, const RequiredCapability& required);

}  // namespace aurcap::planning
