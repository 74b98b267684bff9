#include "aurcap/property.hpp"

#include <algorithm>

#include "aurcap/error.hpp"
#include "aurcap/ontology/namespaces.hpp"
#include "aurcap/ontology/reasoner.hpp"

namespace aurcap::property {

namespace {

std::string string_value(const KnowledgeBase& kb, const Iri& subject, const Iri& property) {
  auto v = kb.value(subject, property);
  return v ? v->lexical() : std::string{};
}

bool is_asserted(const KnowledgeBase& kb, const Iri& individual, const Iri& cls) {
  const auto types = kb.asserted_types(individual);
  return std::find(types.begin(), types.end(), cls) != types.end();
}

// Literal coerced to the type description's datatype; integers widen to decimal.
Literal coerce(const Literal& v, Datatype target) {
  if (v.datatype() == target) return v;
  if (target == Datatype::Decimal && v.datatype() == Datatype::Integer) return Literal(Datatype::Decimal, v.lexical());
  throw Error(Errc::DatatypeMismatch, "expected " + std::string(aurcap::to_string(target)) + ", got " +
                                          std::string(aurcap::to_string(v.datatype())) + " '" + v.lexical() + "'");
}

}  // namespace

std::string_view to_string(Role role) noexcept {
  switch (role) {
    case Role::Actual: return "Actual";
    case Role::Requirement: return "Requirement";
    case Role::Assurance: return "Assurance";
  }
  return "Requirement";
}

std::optional<Role> role_from_string(std::string_view text) noexcept {
  if (text == "Actual") return Role::Actual;
  if (text == "Requirement") return Role::Requirement;
  if (text == "Assurance") return Role::Assurance;
  return std::nullopt;
}

std::string_view to_string(ExpressionKind kind) noexcept {
  switch (kind) {
    case ExpressionKind::Equals: return "Equals";
    case ExpressionKind::LessOrEqual: return "LessOrEqual";
    case ExpressionKind::GreaterOrEqual: return "GreaterOrEqual";
    case ExpressionKind::Interval: return "Interval";
  }
  return "Equals";
}

std::optional<ExpressionKind> expression_kind_from_string(std::string_view text) noexcept {
  if (text == "Equals") return ExpressionKind::Equals;
  if (text == "LessOrEqual") return ExpressionKind::LessOrEqual;
  if (text == "GreaterOrEqual") return ExpressionKind::GreaterOrEqual;
  if (text == "Interval") return ExpressionKind::Interval;
  return std::nullopt;
}

void Expression::validate() const {
  if (kind != ExpressionKind::Equals && !value.is_numeric())
    throw Error(Errc::InvalidExpression,
                std::string(to_string(kind)) + " needs a numeric operand, got " + std::string(aurcap::to_string(value.datatype())));
  if (kind == ExpressionKind::Interval) {
    if (!upper.is_numeric()) throw Error(Errc::InvalidExpression, "Interval upper bound must be numeric");
    if (value.value_compare(upper) == std::partial_ordering::greater)
      throw Error(Errc::InvalidExpression, "Interval lower bound " + value.lexical() + " exceeds upper bound " + upper.lexical());
  }
}

namespace {

struct Bounds {
  const Literal* lo = nullptr;  // nullptr: unbounded
  const Literal* hi = nullptr;
};

Bounds bounds_of(const Expression& e) {
  switch (e.kind) {
    case ExpressionKind::Equals: return {&e.value, &e.value};
    case ExpressionKind::LessOrEqual: return {nullptr, &e.value};
    case ExpressionKind::GreaterOrEqual: return {&e.value, nullptr};
    case ExpressionKind::Interval: return {&e.value, &e.upper};
  }
  return {};
}

std::partial_ordering compare_checked(const Literal& a, const Literal& b) {
  const auto c = a.value_compare(b);
  if (c == std::partial_ordering::unordered)
    throw Error(Errc::DatatypeMismatch, "cannot compare '" + a.lexical() + "' with '" + b.lexical() + "'");
  return c;
}

}  // namespace

bool Expression::contains(const Literal& v) const {
  const auto b = bounds_of(*this);
  if (b.lo && compare_checked(v, *b.lo) == std::partial_ordering::less) return false;
  if (b.hi && compare_checked(v, *b.hi) == std::partial_ordering::greater) return false;
  return true;
}

bool Expression::includes(const Expression& inner) const {
  const auto outer_b = bounds_of(*this);
  const auto inner_b = bounds_of(inner);
  // inner is non-empty (validated), so containment reduces to the bounds
  if (outer_b.lo) {
    if (!inner_b.lo || compare_checked(*inner_b.lo, *outer_b.lo) == std::partial_ordering::less) return false;
  }
  if (outer_b.hi) {
    if (!inner_b.hi || compare_checked(*inner_b.hi, *outer_b.hi) == std::partial_ordering::greater) return false;
  }
  return true;
}

Iri define_type_description(KnowledgeBase& kb, const TypeDescription& td) {
  if (td.id.empty()) throw Error(Errc::InvalidIri, "type description without id");
  if (is_asserted(kb, td.id, vocab::TypeDescription))
    throw Error(Errc::DuplicateTypeDescription, td.id.str() + " is already defined");
  if (td.datatype == Datatype::IriRef)
    throw Error(Errc::DatatypeMismatch, "type descriptions take decimal, integer, boolean or string values");
  kb.add_type(td.id, vocab::TypeDescription);
  kb.add_value(td.id, vocab::preferredName, Literal::string(td.preferred_name));
  kb.add_value(td.id, vocab::definition, Literal::string(td.definition));
  kb.add_value(td.id, vocab::unitOfMeasure, Literal::string(td.unit));
  kb.add_value(td.id, vocab::valueDatatype, Literal::string(std::string(aurcap::to_string(td.datatype))));
  return td.id;
}

std::optional<TypeDescription> type_description(const KnowledgeBase& kb, const Iri& id) {
  if (!is_asserted(kb, id, vocab::TypeDescription)) return std::nullopt;
  TypeDescription td;
  td.id = id;
  td.preferred_name = string_value(kb, id, vocab::preferredName);
  td.definition = string_value(kb, id, vocab::definition);
  td.unit = string_value(kb, id, vocab::unitOfMeasure);
  const auto dt = datatype_from_string(string_value(kb, id, vocab::valueDatatype));
  if (!dt) throw Error(Errc::InvalidLiteral, "type description " + id.str() + " has no valid datatype");
  td.datatype = *dt;
  return td;
}

std::optional<Iri> data_element_of(const KnowledgeBase& kb, const Iri& owner, const Iri& td) {
  for (const auto& de : kb.objects(owner, vocab::hasDataElement))
    if (kb.object(de, vocab::hasTypeDescription) == td) return de;
  return std::nullopt;
}

std::vector<DataElement> data_elements_of(const KnowledgeBase& kb, const Iri& owner) {
  std::vector<DataElement> out;
  for (const auto& de : kb.objects(owner, vocab::hasDataElement)) {
    auto td = kb.object(de, vocab::hasTypeDescription);
    if (td) out.push_back({de, *td, owner});
  }
  return out;
}

Iri ensure_data_element(KnowledgeBase& kb, const Iri& owner, const Iri& td) {
  if (!kb.is_individual(owner)) throw Error(Errc::UnknownOwner, owner.str());
  if (!type_description(kb, td)) throw Error(Errc::UnknownTypeDescription, td.str());
  if (auto existing = data_element_of(kb, owner, td)) return *existing;
  const Iri de = owner.with_suffix("_de_" + std::string(td.local_name()));
  kb.add_type(de, vocab::DataElement);
  kb.add_link(de, vocab::hasTypeDescription, td);
  kb.add_link(owner, vocab::hasDataElement, de);
  return de;
}

namespace {

void write_expression(KnowledgeBase& kb, const InstanceDescription& inst) {
  kb.add_type(inst.id, vocab::InstanceDescription);
  kb.add_link(inst.id, vocab::forTypeDescription, inst.type_description);
  kb.add_value(inst.id, vocab::role, Literal::string(std::string(to_string(inst.role))));
  kb.add_value(inst.id, vocab::expression, Literal::string(std::string(to_string(inst.expression.kind))));
  if (inst.expression.kind == ExpressionKind::Interval) {
    kb.add_value(inst.id, vocab::lowerBound, inst.expression.value);
    kb.add_value(inst.id, vocab::upperBound, inst.expression.upper);
  } else {
    kb.add_value(inst.id, vocab::value, inst.expression.value);
  }
}

InstanceDescription checked(const KnowledgeBase& kb, InstanceDescription inst) {
  auto td = type_description(kb, inst.type_description);
  if (!td) throw Error(Errc::UnknownTypeDescription, inst.type_description.str());
  inst.expression.value = coerce(inst.expression.value, td->datatype);
  if (inst.expression.kind == ExpressionKind::Interval)
    inst.expression.upper = coerce(inst.expression.upper, td->datatype);
  inst.expression.validate();
  if (inst.role == Role::Actual && inst.expression.kind != ExpressionKind::Equals)
    throw Error(Errc::InvalidExpression, "an actual value must be an Equals expression");
  return inst;
}

}  // namespace

Iri attach(KnowledgeBase& kb, const Iri& owner, const Iri& td, InstanceDescription inst) {
  if (!kb.is_individual(owner)) throw Error(Errc::UnknownOwner, owner.str());
  if (!type_description(kb, td)) throw Error(Errc::UnknownTypeDescription, td.str());
  if (!inst.type_description.empty() && inst.type_description != td)
    throw Error(Errc::TypeDescriptionMismatch, inst.type_description.str() + " vs " + td.str());
  inst.type_description = td;
  inst = checked(kb, std::move(inst));
  const Iri de = ensure_data_element(kb, owner, td);
  if (inst.id.empty()) {
    const auto n = kb.objects(de, vocab::hasInstanceDescription).size();
    inst.id = de.with_suffix("_i" + std::to_string(n));
    while (kb.is_individual(inst.id)) inst.id = inst.id.with_suffix("x");
  }
  inst.data_element = de;
  write_expression(kb, inst);
  kb.add_link(de, vocab::hasInstanceDescription, inst.id);
  return inst.id;
}

void write_instance_description(KnowledgeBase& kb, const InstanceDescription& inst) {
  if (inst.id.empty()) throw Error(Errc::InvalidIri, "instance description without id");
  if (inst.type_description.empty()) throw Error(Errc::UnknownTypeDescription, "missing type description");
  inst.expression.validate();
  write_expression(kb, inst);
}

InstanceDescription read_instance_description(const KnowledgeBase& kb, const Iri& id) {
  InstanceDescription inst;
  inst.id = id;
  auto td = kb.object(id, vocab::forTypeDescription);
  if (!td) {
    for (const auto& de : kb.subjects(vocab::hasInstanceDescription, id)) {
      inst.data_element = de;
      td = kb.object(de, vocab::hasTypeDescription);
    }
  } else {
    for (const auto& de : kb.subjects(vocab::hasInstanceDescription, id)) inst.data_element = de;
  }
  if (!td) throw Error(Errc::UnknownTypeDescription, "instance description " + id.str() + " has no type description");
  inst.type_description = *td;
  const auto role = role_from_string(string_value(kb, id, vocab::role));
  if (!role) throw Error(Errc::InvalidExpression, "instance description " + id.str() + " has no valid role");
  inst.role = *role;
  const auto kind = expression_kind_from_string(string_value(kb, id, vocab::expression));
  if (!kind) throw Error(Errc::InvalidExpression, "instance description " + id.str() + " has no valid expression");
  inst.expression.kind = *kind;
  auto need = [&](const Iri& property) {
    auto v = kb.value(id, property);
    if (!v) throw Error(Errc::InvalidExpression, id.str() + " lacks " + std::string(property.local_name()));
    return *v;
  };
  if (*kind == ExpressionKind::Interval) {
    inst.expression.value = need(vocab::lowerBound);
    inst.expression.upper = need(vocab::upperBound);
  } else {
    inst.expression.value = need(vocab::value);
  }
  if (auto def = type_description(kb, inst.type_description)) {
    inst.expression.value = coerce(inst.expression.value, def->datatype);
    if (*kind == ExpressionKind::Interval) inst.expression.upper = coerce(inst.expression.upper, def->datatype);
  }
  inst.expression.validate();
  return inst;
}

std::vector<InstanceDescription> instance_descriptions_of(const KnowledgeBase& kb, const Iri& owner) {
  std::vector<InstanceDescription> out;
  for (const auto& de : data_elements_of(kb, owner))
    for (const auto& inst : kb.objects(de.id, vocab::hasInstanceDescription))
      out.push_back(read_instance_description(kb, inst));
  return out;
}

bool satisfies(const InstanceDescription& requirement, const InstanceDescription& offer) {
  if (requirement.role != Role::Requirement)
    throw Error(Errc::RoleMismatch, "first argument must be a Requirement, got " + std::string(to_string(requirement.role)));
  if (offer.role == Role::Requirement) throw Error(Errc::RoleMismatch, "offer must be an Assurance or an Actual value");
  if (requirement.type_description != offer.type_description)
    throw Error(Errc::TypeDescriptionMismatch,
                requirement.type_description.str() + " vs " + offer.type_description.str());
  if (offer.role == Role::Actual) {
    if (offer.expression.kind != ExpressionKind::Equals)
      throw Error(Errc::InvalidExpression, "an actual value must be an Equals expression");
    return requirement.expression.contains(offer.expression.value);
  }
  return offer.expression.includes(requirement.expression);
}

}  // namespace aurcap::property
