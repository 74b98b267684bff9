#include "aurcap/planning/match.hpp"

#include <algorithm>

#include "aurcap/error.hpp"
#include "aurcap/ontology/namespaces.hpp"
#include "aurcap/ontology/reasoner.hpp"

namespace aurcap::planning {

namespace {

bool is_live(const interfaces::Descriptor& d) {
  return d.kind == interfaces::InterfaceKind::Mqtt || d.kind == interfaces::InterfaceKind::Http;
}

std::vector<property::InstanceDescription> offers_of(const KnowledgeBase& kb, const Iri& owner) {
  std::vector<property::InstanceDescription> out;
  for (auto& inst : property::instance_descriptions_of(kb, owner))
    if (inst.role != property::Role::Requirement) out.push_back(std::move(inst));
  return out;
}

bool offer_meets(const property::InstanceDescription& req, const property::InstanceDescription& offer) {
  if (offer.type_description != req.type_description) return false;
  if (offer.role == property::Role::Actual && offer.expression.kind != property::ExpressionKind::Equals) return false;
  if (offer.expression.datatype() != req.expression.datatype() &&
      !(offer.expression.value.is_numeric() && req.expression.value.is_numeric()))
    return false;
  return property::satisfies(req, offer);
}

}  // namespace

bool kinds_included(const capability::KindCounts& inner, const capability::KindCounts& outer) {
  for (const auto& [kind, n] : inner) {
    if (n <= 0) continue;
    auto it = outer.find(kind);
    if (it == outer.end() || it->second < n) return false;
  }
  return true;
}

std::vector<Match> match(const KnowledgeBase& kb, const RequiredCapability& required) {
  if (!kb.is_class(required.capability_type) || !is_subclass_of(kb, required.capability_type, vocab::ProcessOperator))
    throw Error(Errc::UnknownCapabilityType, required.capability_type.str() + " is not a capability type");
  for (const auto& r : required.requirements) {
    if (!property::type_description(kb, r.type_description))
      throw Error(Errc::UnknownTypeDescription, r.type_description.str());
    if (r.role != property::Role::Requirement)
      throw Error(Errc::RoleMismatch, r.id.str() + " must be a Requirement");
  }

  std::vector<Match> out;
  for (const auto& cap : instances_of(kb, required.capability_type)) {
    if (!kinds_included(capability::count_kinds(capability::inputs_of(kb, cap)), required.required_inputs)) continue;
    if (!kinds_included(required.required_outputs, capability::count_kinds(capability::outputs_of(kb, cap)))) continue;
    const auto cap_offers = offers_of(kb, cap);
    const auto skills = kb.objects(cap, vocab::isRealizedBy);
    for (const auto& robot : kb.subjects(vocab::providesCapability, cap)) {
      auto offers = cap_offers;
      for (auto& o : offers_of(kb, robot)) offers.push_back(std::move(o));
      std::vector<bool> used(offers.size(), false);
      bool satisfied = true;
      for (const auto& req : required.requirements) {
        bool met = false;
        for (std::size_t i = 0; i < offers.size(); ++i) {
          if (offer_meets(req, offers[i])) {
            used[i] = true;
            met = true;
          }
        }
        if (!met) {
          satisfied = false;
          break;
        }
      }
      if (!satisfied) continue;
      std::size_t unused = 0;
      for (std::size_t i = 0; i < offers.size(); ++i)
        unused += offers[i].role == property::Role::Assurance && !used[i];

      for (const auto& skill : skills) {
        if (kb.object(skill, vocab::hostedOn) != robot) continue;
        std::vector<interfaces::Descriptor> live;
        for (auto& d : interfaces::read_descriptors(kb, skill))
          if (is_live(d)) live.push_back(std::move(d));
        if (live.empty()) continue;
        std::stable_sort(live.begin(), live.end(), [](const auto& a, const auto& b) {
          return static_cast<int>(a.kind) < static_cast<int>(b.kind);
        });
        out.push_back({robot, cap, skill, unused, std::move(live)});
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const Match& a, const Match& b) {
    return std::tie(a.unused_assurances, a.robot, a.capability, a.skill) <
           std::tie(b.unused_assurances, b.robot, b.capability, b.skill);
  });
  return out;
}

}  // namespace aurcap::planning
