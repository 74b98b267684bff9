#pragma once

#include <chrono>
#include <string>
#include <thread>
#include <vector>

#include "aurcap/capability.hpp"
#include "aurcap/models.hpp"
#include "aurcap/ontology/namespaces.hpp"
#include "aurcap/property.hpp"
#include "aurcap/skill/runtime.hpp"

namespace aurcap::test {

inline Iri sx(const std::string& local) { return Iri("https://example.org/sk#" + local); }

// Seed KB with one robot providing one fly capability and a targetAltitude
// type description.
inline KnowledgeBase skill_kb() {
  auto kb = models::load_seed();
  kb.add_type(sx("Quadrocopter1"), vocab::Robot);
  kb.add_type(sx("camera1"), vocab::Sensor);
  capability::define_capability(kb, {sx("fly"), ns::term(ns::aur_cap, "Fly"), {}, {}, {}, {}});
  capability::define_capability(kb, {sx("detect"), ns::term(ns::aur_cap, "Detect"), {}, {}, {}, {}});
  capability::provides_capability(kb, sx("Quadrocopter1"), sx("fly"));
  property::define_type_description(kb, {sx("targetAltitude"), "target altitude", "", "m", Datatype::Decimal});
  return kb;
}

// Loops on checkpoints until cancelled; never completes by itself.
inline void endless(skill::ExecutionContext& ctx) {
  while (ctx.sleep_for(std::chrono::milliseconds(2))) {
  }
}

inline std::vector<skill::SkillState> drain(skill::StateStream& stream,
                                            std::chrono::milliseconds quiet = std::chrono::milliseconds(100)) {
  std::vector<skill::SkillState> out;
  while (auto c = stream.next(quiet)) out.push_back(c->state);
  return out;
}

}  // namespace aurcap::test
