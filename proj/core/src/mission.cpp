#include "aurcap/planning/mission.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <sstream>

#include "aurcap/error.hpp"
#include "aurcap/ontology/namespaces.hpp"
#include "aurcap/ontology/turtle.hpp"

namespace aurcap::planning {

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(Errc::InvalidMission, what); }

capability::KindCounts parse_kinds(const KnowledgeBase& kb, const Iri& node, const Iri& property) {
  capability::KindCounts out;
  for (const auto& lit : kb.values(node, property)) {
    std::istringstream words(lit.lexical());
    std::string word;
    while (words >> word) {
      const auto kind = capability::io_kind_from_string(word);
      if (!kind) invalid(node.str() + ": unknown input/output kind '" + word + "'");
      ++out[*kind];
    }
  }
  return out;
}

std::string format_kinds(const capability::KindCounts& counts) {
  std::string out;
  for (const auto& [kind, n] : counts)
    for (int i = 0; i < n; ++i) {
      if (!out.empty()) out += ' ';
      out += capability::to_string(kind);
    }
  return out;
}

bool step_before(const MissionStep& a, const MissionStep& b) { return std::tie(a.ordinal, a.id) < std::tie(b.ordinal, b.id); }

MissionStep read_step(const KnowledgeBase& kb, const Iri& id) {
  MissionStep step;
  step.id = id;
  if (auto ord = kb.value(id, vocab::stepOrdinal)) {
    if (ord->datatype() != Datatype::Integer) invalid(id.str() + ": ordinal must be an integer");
    step.ordinal = static_cast<int>(ord->as_double());
  }
  const auto reqs = kb.objects(id, vocab::requiresCapability);
  if (reqs.size() != 1) invalid(id.str() + ": a step requires exactly one capability");
  step.required = read_required_capability(kb, reqs.front());
  for (const auto& d : kb.objects(id, vocab::dependsOn)) step.depends_on.insert(d);
  std::vector<std::pair<Iri, skill::Parameter>> params;
  for (const auto& p : kb.objects(id, vocab::hasParameter)) {
    const auto td = kb.object(p, vocab::parameterType);
    const auto value = kb.value(p, vocab::parameterValue);
    if (!td || !value) invalid(p.str() + ": a start parameter needs parameterType and parameterValue");
    params.push_back({p, {*td, *value}});
  }
  std::sort(params.begin(), params.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (auto& [pid, param] : params) step.parameters.push_back(std::move(param));
  return step;
}

}  // namespace

RequiredCapability read_required_capability(const KnowledgeBase& kb, const Iri& req) {
  RequiredCapability out;
  const auto type = kb.object(req, vocab::capabilityType);
  if (!type) invalid(req.str() + ": missing capabilityType");
  out.capability_type = *type;
  out.required_inputs = parse_kinds(kb, req, vocab::requiredInput);
  out.required_outputs = parse_kinds(kb, req, vocab::requiredOutput);
  for (const auto& r : kb.objects(req, vocab::hasRequirement)) {
    try {
      auto inst = property::read_instance_description(kb, r);
      if (inst.role != property::Role::Requirement) invalid(r.str() + ": mission constraints must be Requirements");
      out.requirements.push_back(std::move(inst));
    } catch (const Error& e) {
      if (e.code() == Errc::InvalidMission) throw;
      invalid(r.str() + ": " + e.detail());
    }
  }
  return out;
}

RequiredCapability parse_required_capability(std::string_view turtle) {
  const auto kb = parse_turtle(turtle);
  const auto ids = kb.asserted_individuals(vocab::RequiredCapability);
  if (ids.size() != 1) invalid("expected exactly one RequiredCapability, found " + std::to_string(ids.size()));
  return read_required_capability(kb, ids.front());
}

std::vector<Iri> missions_in(const KnowledgeBase& kb) {
  auto out = kb.asserted_individuals(vocab::Mission);
  std::sort(out.begin(), out.end());
  return out;
}

Mission read_mission(const KnowledgeBase& kb, const Iri& id) {
  const auto types = kb.asserted_types(id);
  if (std::find(types.begin(), types.end(), vocab::Mission) == types.end())
    invalid(id.str() + " is not a Mission");
  Mission m;
  m.id = id;
  for (const auto& s : kb.objects(id, vocab::hasStep)) m.steps.push_back(read_step(kb, s));
  std::sort(m.steps.begin(), m.steps.end(), step_before);
  std::set<Iri> ids;
  for (const auto& s : m.steps) ids.insert(s.id);
  for (const auto& s : m.steps)
    for (const auto& d : s.depends_on)
      if (!ids.count(d)) invalid(s.id.str() + " depends on " + d.str() + ", which is not a step of this mission");
  return m;
}

Mission parse_mission(std::string_view turtle) {
  const auto kb = parse_turtle(turtle);
  const auto ids = kb.asserted_individuals(vocab::Mission);
  if (ids.size() != 1) invalid("expected exactly one Mission, found " + std::to_string(ids.size()));
  return read_mission(kb, ids.front());
}

void write_mission(KnowledgeBase& kb, const Mission& mission) {
  kb.add_type(mission.id, vocab::Mission);
  for (const auto& step : mission.steps) {
    kb.add_link(mission.id, vocab::hasStep, step.id);
    kb.add_type(step.id, vocab::Step);
    kb.add_value(step.id, vocab::stepOrdinal, Literal::integer(step.ordinal));
    for (const auto& d : step.depends_on) kb.add_link(step.id, vocab::dependsOn, d);
    const auto req = step.id.with_suffix("_req");
    kb.add_link(step.id, vocab::requiresCapability, req);
    kb.add_type(req, vocab::RequiredCapability);
    kb.add_link(req, vocab::capabilityType, step.required.capability_type);
    if (const auto in = format_kinds(step.required.required_inputs); !in.empty())
      kb.add_value(req, vocab::requiredInput, Literal::string(in));
    if (const auto out = format_kinds(step.required.required_outputs); !out.empty())
      kb.add_value(req, vocab::requiredOutput, Literal::string(out));
    for (std::size_t i = 0; i < step.required.requirements.size(); ++i) {
      auto inst = step.required.requirements[i];
      if (inst.id.empty()) inst.id = step.id.with_suffix("_r" + std::to_string(i + 1));
      inst.data_element.reset();
      property::write_instance_description(kb, inst);
      kb.add_link(req, vocab::hasRequirement, inst.id);
    }
    for (std::size_t i = 0; i < step.parameters.size(); ++i) {
      // zero-padded so that id order equals listing order
      char suffix[16];
      std::snprintf(suffix, sizeof suffix, "_p%03zu", i + 1);
      const auto p = step.id.with_suffix(suffix);
      kb.add_link(step.id, vocab::hasParameter, p);
      kb.add_type(p, vocab::StartParameter);
      kb.add_link(p, vocab::parameterType, step.parameters[i].type_description);
      kb.add_value(p, vocab::parameterValue, step.parameters[i].value);
    }
  }
}

std::string mission_to_turtle(const Mission& mission) {
  KnowledgeBase kb;
  kb.set_prefix("aur-mission", ns::aur_mission);
  kb.set_prefix("aur-cap", ns::aur_cap);
  kb.set_prefix("iec61360", ns::iec61360);
  kb.set_prefix("fleet", ns::fleet);
  write_mission(kb, mission);
  return serialize_turtle(kb);
}

std::vector<const MissionStep*> topological_order(const Mission& mission) {
  std::map<Iri, const MissionStep*> by_id;
  for (const auto& s : mission.steps) by_id[s.id] = &s;
  std::map<Iri, std::size_t> pending;
  std::map<Iri, std::vector<const MissionStep*>> dependents;
  for (const auto& s : mission.steps) {
    std::size_t n = 0;
    for (const auto& d : s.depends_on) {
      if (!by_id.count(d)) throw Error(Errc::InvalidMission, s.id.str() + " depends on unknown step " + d.str());
      dependents[d].push_back(&s);
      ++n;
    }
    pending[s.id] = n;
  }
  auto later = [](const MissionStep* a, const MissionStep* b) { return step_before(*b, *a); };
  std::priority_queue<const MissionStep*, std::vector<const MissionStep*>, decltype(later)> ready(later);
  for (const auto& s : mission.steps)
    if (pending[s.id] == 0) ready.push(&s);
  std::vector<const MissionStep*> out;
  while (!ready.empty()) {
    const auto* s = ready.top();
    ready.pop();
    out.push_back(s);
    for (const auto* d : dependents[s->id])
      if (--pending[d->id] == 0) ready.push(d);
  }
  if (out.size() != mission.steps.size()) {
    std::string stuck;
    for (const auto& s : mission.steps)
      if (pending[s.id] > 0) stuck += (stuck.empty() ? "" : ", ") + s.id.str();
    throw Error(Errc::CyclicMission, "dependency cycle among " + stuck);
  }
  return out;
}

}  // namespace aurcap::planning
