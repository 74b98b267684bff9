#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "aurcap/planning/match.hpp"
#include "aurcap/skill/runtime.hpp"

namespace aurcap::planning {

struct MissionStep {
  Iri id;
  int ordinal = 0;  // listing order; ties broken by id
  RequiredCapability required;
  std::set<Iri> depends_on;
  std::vector<skill::Parameter> parameters;  // Start parameters, passed through

  friend bool operator==(const MissionStep&, const MissionStep&) = default;
};

struct Mission {
  Iri id;
  std::vector<MissionStep> steps;  // sorted by (ordinal, id)

  friend bool operator==(const Mission&, const Mission&) = default;
};

// Reads the mission individual `id`. Throws InvalidMission for missing or
// malformed fields and dependencies on steps outside the mission.
Mission read_mission(const KnowledgeBase& kb, const Iri& id);
std::vector<Iri> missions_in(const KnowledgeBase& kb);
// Reads a RequiredCapability individual. Throws InvalidMission.
RequiredCapability read_required_capability(const KnowledgeBase& kb, const Iri& id);
// Parses Turtle holding exactly one RequiredCapability.
RequiredCapability parse_required_capability(std::string_view turtle);
// Parses Turtle holding exactly one mission.
Mission parse_mission(std::string_view turtle);

void write_mission(KnowledgeBase& kb, const Mission& mission);
std::string mission_to_turtle(const Mission& mission);

// Kahn order, ties by (ordinal, id). Throws CyclicMission.
std::vector<const MissionStep*> topological_order(const Mission& mission);

}  // namespace aurcap::planning
