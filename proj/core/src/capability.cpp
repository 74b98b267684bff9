#include "aurcap/capability.hpp"

#include <algorithm>
#include <functional>

#include "aurcap/error.hpp"
#include "aurcap/ontology/namespaces.hpp"
#include "aurcap/ontology/reasoner.hpp"

namespace aurcap::capability {

namespace {

constexpr IoKind kKinds[] = {IoKind::Product, IoKind::Information, IoKind::Energy};

std::int64_t ordinal_of(const KnowledgeBase& kb, const Iri& node) {
  auto v = kb.value(node, vocab::ordinal);
  if (!v || v->datatype() != Datatype::Integer) return 0;
  return std::stoll(v->lexical());
}

std::vector<Iri> by_ordinal(const KnowledgeBase& kb, std::vector<Iri> nodes) {
  std::stable_sort(nodes.begin(), nodes.end(),
                   [&](const Iri& a, const Iri& b) { return ordinal_of(kb, a) < ordinal_of(kb, b); });
  return nodes;
}

std::vector<IoRole> read_roles(const KnowledgeBase& kb, const Iri& id, const Iri& property) {
  std::vector<IoRole> out;
  for (const auto& node : by_ordinal(kb, kb.objects(id, property))) {
    IoRole role;
    const auto types = kb.asserted_types(node);
    for (auto k : kKinds)
      if (std::find(types.begin(), types.end(), io_kind_class(k)) != types.end()) role.kind = k;
    if (auto label = kb.value(node, vocab::stateLabel)) role.state_label = label->lexical();
    out.push_back(std::move(role));
  }
  return out;
}

// Raw slot successors, whether or not the target is a defined capability.
std::vector<Iri> raw_subs(const KnowledgeBase& kb, const Iri& id) {
  std::vector<Iri> out;
  for (const auto& slot : by_ordinal(kb, kb.objects(id, vocab::hasSubOperatorSlot)))
    if (auto op = kb.object(slot, vocab::slotOperator)) out.push_back(*op);
  return out;
}

bool reaches(const KnowledgeBase& kb, const Iri& from, const Iri& target, std::set<Iri>& seen) {
  if (from == target) return true;
  if (!seen.insert(from).second) return false;
  for (const auto& next : raw_subs(kb, from))
    if (reaches(kb, next, target, seen)) return true;
  return false;
}

void write_roles(KnowledgeBase& kb, const Iri& id, const Iri& property, std::string_view tag,
                 const std::vector<IoRole>& roles) {
  for (std::size_t i = 0; i < roles.size(); ++i) {
    const Iri node = id.with_suffix("_" + std::string(tag) + std::to_string(i));
    kb.add_type(node, io_kind_class(roles[i].kind));
    kb.add_value(node, vocab::stateLabel, Literal::string(roles[i].state_label));
    kb.add_value(node, vocab::ordinal, Literal::integer(static_cast<std::int64_t>(i)));
    kb.add_link(id, property, node);
  }
}

std::string describe(const KindCounts& counts) {
  std::string out = "{";
  for (const auto& [kind, n] : counts) {
    if (n == 0) continue;
    if (out.size() > 1) out += ", ";
    out += std::string(to_string(kind)) + " x" + std::to_string(n);
  }
  return out + "}";
}

KindCounts normalized(KindCounts c) {
  std::erase_if(c, [](const auto& kv) { return kv.second == 0; });
  return c;
}

}  // namespace

std::string_view to_string(IoKind kind) noexcept {
  switch (kind) {
    case IoKind::Product: return "Product";
    case IoKind::Information: return "Information";
    case IoKind::Energy: return "Energy";
  }
  return "Product";
}

std::optional<IoKind> io_kind_from_string(std::string_view text) noexcept {
  for (auto k : kKinds)
    if (text == to_string(k)) return k;
  return std::nullopt;
}

const Iri& io_kind_class(IoKind kind) noexcept {
  switch (kind) {
    case IoKind::Product: return vocab::Product;
    case IoKind::Information: return vocab::Information;
    case IoKind::Energy: return vocab::Energy;
  }
  return vocab::Product;
}

KindCounts count_kinds(const std::vector<IoRole>& roles) {
  KindCounts out;
  for (const auto& r : roles) ++out[r.kind];
  return out;
}

bool is_capability(const KnowledgeBase& kb, const Iri& id) {
  return kb.is_individual(id) && kb.is_class(vocab::ProcessOperator) && is_instance_of(kb, id, vocab::ProcessOperator);
}

Signature chain_signature(const KnowledgeBase& kb, const std::vector<Iri>& sub_operators) {
  Signature sig;
  KindCounts pool;
  for (const auto& sub : sub_operators) {
    for (const auto& in : inputs_of(kb, sub)) {
      if (pool[in.kind] > 0)
        --pool[in.kind];
      else
        ++sig.inputs[in.kind];
    }
    for (const auto& out : outputs_of(kb, sub)) ++pool[out.kind];
  }
  sig.inputs = normalized(std::move(sig.inputs));
  sig.outputs = normalized(std::move(pool));
  return sig;
}

Iri define_capability(KnowledgeBase& kb, const CapabilityDescription& desc) {
  if (desc.id.empty()) throw Error(Errc::InvalidIri, "capability without id");
  if (!kb.is_class(desc.capability_type) || !kb.is_class(vocab::ProcessOperator) ||
      !is_subclass_of(kb, desc.capability_type, vocab::ProcessOperator))
    throw Error(Errc::UnknownCapabilityType, desc.capability_type.str());
  if (is_capability(kb, desc.id)) throw Error(Errc::DuplicateId, desc.id.str());
  for (const auto& sub : desc.sub_operators) {
    std::set<Iri> seen;
    if (reaches(kb, sub, desc.id, seen))
      throw Error(Errc::CyclicDecomposition, desc.id.str() + " would contain itself through " + sub.str());
  }
  for (const auto& sub : desc.sub_operators)
    if (!is_capability(kb, sub)) throw Error(Errc::UnknownCapability, sub.str());
  if (!desc.sub_operators.empty()) {
    const Signature chained = chain_signature(kb, desc.sub_operators);
    const Signature declared{normalized(count_kinds(desc.inputs)), normalized(count_kinds(desc.outputs))};
    if (chained != declared)
      throw Error(Errc::SignatureMismatch, desc.id.str() + " declares " + describe(declared.inputs) + " -> " +
                                               describe(declared.outputs) + " but its sub-operators chain to " +
                                               describe(chained.inputs) + " -> " + describe(chained.outputs));
  }

  // constraints are checked on a scratch copy so a bad one leaves kb unchanged
  KnowledgeBase scratch;
  KnowledgeBase* target = &kb;
  if (!desc.constraints.empty()) {
    scratch = kb;
    target = &scratch;
  }
  target->add_type(desc.id, desc.capability_type);
  write_roles(*target, desc.id, vocab::hasInput, "in", desc.inputs);
  write_roles(*target, desc.id, vocab::hasOutput, "out", desc.outputs);
  for (std::size_t i = 0; i < desc.sub_operators.size(); ++i) {
    const Iri slot = desc.id.with_suffix("_sub" + std::to_string(i));
    target->add_type(slot, vocab::DecompositionSlot);
    target->add_link(slot, vocab::slotOperator, desc.sub_operators[i]);
    target->add_value(slot, vocab::ordinal, Literal::integer(static_cast<std::int64_t>(i)));
    target->add_link(desc.id, vocab::hasSubOperatorSlot, slot);
  }
  for (const auto& c : desc.constraints) property::attach(*target, desc.id, c.type_description, c);
  if (target != &kb) kb = std::move(scratch);
  return desc.id;
}

Iri capability_type_of(const KnowledgeBase& kb, const Iri& id) {
  if (!is_capability(kb, id)) throw Error(Errc::UnknownCapability, id.str());
  std::vector<Iri> candidates;
  for (const auto& t : kb.asserted_types(id))
    if (is_subclass_of(kb, t, vocab::ProcessOperator)) candidates.push_back(t);
  for (const auto& c : candidates) {
    const bool most_specific = std::none_of(candidates.begin(), candidates.end(), [&](const Iri& other) {
      return other != c && is_subclass_of(kb, other, c) && !is_subclass_of(kb, c, other);
    });
    if (most_specific) return c;
  }
  return vocab::ProcessOperator;
}

std::vector<IoRole> inputs_of(const KnowledgeBase& kb, const Iri& id) { return read_roles(kb, id, vocab::hasInput); }
std::vector<IoRole> outputs_of(const KnowledgeBase& kb, const Iri& id) { return read_roles(kb, id, vocab::hasOutput); }
std::vector<Iri> sub_operators_of(const KnowledgeBase& kb, const Iri& id) { return raw_subs(kb, id); }

CapabilityDescription describe_capability(const KnowledgeBase& kb, const Iri& id) {
  CapabilityDescription desc;
  desc.id = id;
  desc.capability_type = capability_type_of(kb, id);
  desc.inputs = inputs_of(kb, id);
  desc.outputs = outputs_of(kb, id);
  desc.sub_operators = sub_operators_of(kb, id);
  desc.constraints = property::instance_descriptions_of(kb, id);
  return desc;
}

ObjectLink provides_capability(KnowledgeBase& kb, const Iri& resource, const Iri& capability) {
  if (!kb.is_individual(resource) || !kb.is_class(vocab::TechnicalResource) ||
      !is_instance_of(kb, resource, vocab::TechnicalResource))
    throw Error(Errc::NotATechnicalResource, resource.str());
  if (!is_capability(kb, capability)) throw Error(Errc::UnknownCapability, capability.str());
  ObjectLink link{resource, vocab::providesCapability, capability};
  kb.add(link);
  return link;
}

std::vector<Iri> providers_of(const KnowledgeBase& kb, const Iri& capability) {
  return kb.subjects(vocab::providesCapability, capability);
}

std::vector<Iri> provided_by(const KnowledgeBase& kb, const Iri& resource) {
  return kb.objects(resource, vocab::providesCapability);
}

std::set<Iri> capabilities_of_type(const KnowledgeBase& kb, const Iri& type) {
  if (!kb.is_class(type) || !kb.is_class(vocab::ProcessOperator) || !is_subclass_of(kb, type, vocab::ProcessOperator))
    throw Error(Errc::UnknownTerm, type.str() + " is not a capability type");
  return instances_of(kb, type);
}

std::vector<Iri> flatten(const KnowledgeBase& kb, const Iri& capability) {
  if (!is_capability(kb, capability)) throw Error(Errc::UnknownCapability, capability.str());
  std::vector<Iri> leaves;
  std::vector<Iri> path;
  std::function<void(const Iri&)> walk = [&](const Iri& node) {
    if (std::find(path.begin(), path.end(), node) != path.end())
      throw Error(Errc::CyclicDecomposition, node.str() + " contains itself");
    const auto subs = raw_subs(kb, node);
    if (subs.empty()) {
      leaves.push_back(node);
      return;
    }
    path.push_back(node);
    for (const auto& s : subs) walk(s);
    path.pop_back();
  };
  walk(capability);
  return leaves;
}

void check_decompositions(const KnowledgeBase& kb) {
  for (const auto& a : kb.assertions()) {
    const auto* link = std::get_if<ObjectLink>(&a);
    if (!link || link->property != vocab::hasSubOperatorSlot) continue;
    if (auto op = kb.object(link->object, vocab::slotOperator)) {
      std::set<Iri> seen;
      if (reaches(kb, *op, link->subject, seen))
        throw Error(Errc::CyclicDecomposition, link->subject.str() + " contains itself");
    }
  }
}

}  // namespace aurcap::capability
