#include <benchmark/benchmark.h>

#include "aurcap/fleet/simulator.hpp"
#include "aurcap/interfaces/descriptor.hpp"
#include "aurcap/models.hpp"
#include "aurcap/ontology/namespaces.hpp"
#include "aurcap/planning/match.hpp"
#include "aurcap/planning/mission.hpp"
#include "aurcap/planning/planner.hpp"

using namespace aurcap;

namespace {

// The default fleet replicated `copies` times, every skill with an HTTP
// descriptor so it counts as live. Nothing listens; planning never dials.
KnowledgeBase fleet_kb(int copies) {
  auto kb = models::load_seed();
  for (int k = 0; k < copies; ++k) {
    auto spec = fleet::default_fleet();
    const std::string suffix = k == 0 ? "" : "_" + std::to_string(k);
    auto rename = [&](Iri& iri) { iri = Iri(iri.str() + suffix); };
    if (k > 0) spec.type_descriptions.clear();
    spec.composites.clear();
    for (auto& r : spec.robots) {
      rename(r.description.id);
      for (auto& p : r.description.parts) rename(p.id);
      for (auto& cap : r.capabilities) {
        rename(cap.id);
        for (auto& c : cap.constraints) rename(c.id);
      }
      for (auto& p : r.properties) {
        rename(p.owner);
        rename(p.instance.id);
      }
      for (auto& s : r.skills) {
        rename(s.skill);
        rename(s.capability);
      }
    }
    fleet::describe_fleet(kb, spec);
    for (const auto& r : spec.robots)
      for (const auto& s : r.skills) {
        kb.add_type(s.skill, vocab::Skill);
        kb.add_link(s.capability, vocab::isRealizedBy, s.skill);
        kb.add_link(s.skill, vocab::hostedOn, r.description.id);
        interfaces::write_descriptor(kb, interfaces::http_descriptor(s.skill, "http://127.0.0.1:9"));
      }
  }
  return kb;
}

void BM_MatchFly(benchmark::State& state) {
  const auto kb = fleet_kb(static_cast<int>(state.range(0)));
  const auto req = planning::parse_required_capability(
      "@prefix aur-mission: <https://w3id.org/aurcap/mission#> .\n"
      "@prefix aur-cap: <https://w3id.org/aurcap/cap#> .\n"
      "@prefix q: <https://example.org/q#> .\n"
      "q:fly a aur-mission:RequiredCapability ; aur-mission:capabilityType aur-cap:Fly .\n");
  kb.reasoner();
  for (auto _ : state) benchmark::DoNotOptimize(planning::match(kb, req));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_MatchFly)->RangeMultiplier(4)->Range(1, 64)->Complexity();

void BM_PlanTransport(benchmark::State& state) {
  const auto kb = fleet_kb(static_cast<int>(state.range(0)));
  const auto mission = planning::parse_mission(models::text("transport-mission.ttl"));
  kb.reasoner();
  for (auto _ : state) benchmark::DoNotOptimize(planning::plan(kb, mission));
}
BENCHMARK(BM_PlanTransport)->RangeMultiplier(4)->Range(1, 64);

}  // namespace
