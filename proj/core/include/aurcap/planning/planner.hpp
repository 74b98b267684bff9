#pragma once

#include <set>
#include <string>
#include <variant>
#include <vector>

#include "aurcap/planning/mission.hpp"

namespace aurcap::planning {

struct Assignment {
  Iri step;
  Iri robot;
  Iri capability;
  Iri skill;
  interfaces::Descriptor interface;  // MQTT when the skill has one
  std::vector<skill::Parameter> parameters;
  std::set<Iri> depends_on;

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

struct Plan {
  Iri mission;
  std::vector<Assignment> assignments;  // topological order

  const Assignment* find(const Iri& step) const;
  friend bool operator==(const Plan&, const Plan&) = default;
};

struct Unsatisfiable {
  Iri step;
  std::string reason;
  friend bool operator==(const Unsatisfiable&, const Unsatisfiable&) = default;
};

struct PlannerConfig {
  // Steps with no dependency path between them may share a robot.
  bool reusable = true;
};

using PlanOutcome = std::variant<Plan, Unsatisfiable>;

// Reads the KB only. Throws CyclicMission, UnknownCapabilityType,
// UnknownTypeDescription.
PlanOutcome plan(const KnowledgeBase& kb, const Mission& mission, const PlannerConfig& config = {});

// Transitive dependency closure: step -> every step it (indirectly) depends on.
std::map<Iri, std::set<Iri>> dependency_closure(const Mission& mission);

}  // namespace aurcap::planning
