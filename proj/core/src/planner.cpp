#include "aurcap/planning/planner.hpp"

#include <map>
#include <optional>

#include "aurcap/error.hpp"

namespace aurcap::planning {

const Assignment* Plan::find(const Iri& step) const {
  for (const auto& a : assignments)
    if (a.step == step) return &a;
  return nullptr;
}

std::map<Iri, std::set<Iri>> dependency_closure(const Mission& mission) {
  std::map<Iri, std::set<Iri>> closure;
  for (const auto* s : topological_order(mission)) {
    auto& mine = closure[s->id];
    for (const auto& d : s->depends_on) {
      mine.insert(d);
      const auto& theirs = closure[d];
      mine.insert(theirs.begin(), theirs.end());
    }
  }
  return closure;
}

PlanOutcome plan(const KnowledgeBase& kb, const Mission& mission, const PlannerConfig& config) {
  const auto order = topological_order(mission);
  const auto closure = dependency_closure(mission);
  const auto concurrent = [&](const Iri& a, const Iri& b) {
    return a != b && !closure.at(a).count(b) && !closure.at(b).count(a);
  };

  std::vector<std::vector<Match>> candidates;
  for (const auto* step : order) {
    candidates.push_back(match(kb, step->required));
    if (candidates.back().empty())
      return Unsatisfiable{step->id, "no robot offers a matching capability with a live skill for " +
                                         step->required.capability_type.str()};
  }

  // chosen[i] indexes candidates[i]
  std::vector<std::optional<std::size_t>> chosen(order.size());
  const auto robot_of = [&](std::size_t i) -> const Iri& { return candidates[i][*chosen[i]].robot; };
  // Assigned steps running concurrently with step i on `robot`, ignoring `skip`.
  const auto blockers = [&](std::size_t i, const Iri& robot, std::optional<std::size_t> skip) {
    std::vector<std::size_t> out;
    if (config.reusable) return out;
    for (std::size_t j = 0; j < order.size(); ++j)
      if (j != i && j != skip && chosen[j] && concurrent(order[i]->id, order[j]->id) && robot_of(j) == robot)
        out.push_back(j);
    return out;
  };

  for (std::size_t i = 0; i < order.size(); ++i) {
    for (std::size_t c = 0; c < candidates[i].size() && !chosen[i]; ++c)
      if (blockers(i, candidates[i][c].robot, std::nullopt).empty()) chosen[i] = c;
    if (chosen[i]) continue;

    // Single-level backtracking: move each blocking step to its next
    // alternative that clears the conflict.
    for (std::size_t c = 0; c < candidates[i].size() && !chosen[i]; ++c) {
      const auto& robot = candidates[i][c].robot;
      auto saved = chosen;
      bool cleared = true;
      for (const auto j : blockers(i, robot, std::nullopt)) {
        bool moved = false;
        for (std::size_t alt = 0; alt < candidates[j].size() && !moved; ++alt) {
          if (alt == *chosen[j] || candidates[j][alt].robot == robot) continue;
          if (blockers(j, candidates[j][alt].robot, std::nullopt).empty()) {
            chosen[j] = alt;
            moved = true;
          }
        }
        if (!moved) {
          cleared = false;
          break;
        }
      }
      if (cleared)
        chosen[i] = c;
      else
        chosen = std::move(saved);
    }
    if (!chosen[i])
      return Unsatisfiable{order[i]->id, "every matching robot is taken by a concurrent step"};
  }

  Plan p;
  p.mission = mission.id;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto& m = candidates[i][*chosen[i]];
    p.assignments.push_back(
        {order[i]->id, m.robot, m.capability, m.skill, m.interfaces.front(), order[i]->parameters, order[i]->depends_on});
  }
  return p;
}

}  // namespace aurcap::planning
