#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aurcap/ontology/knowledge_base.hpp"

namespace aurcap::property {

// Defined once per model; fixes the meaning, unit and datatype of a property.
struct TypeDescription {
  Iri id;
  std::string preferred_name;
  std::string definition;
  std::string unit;  // UCUM-style code, e.g. "m", "kg"
  Datatype datatype = Datatype::Decimal;

  friend bool operator==(const TypeDescription&, const TypeDescription&) = default;
};

// Links one owner (robot, capability or skill) to one type description.
struct DataElement {
  Iri id;
  Iri type_description;
  Iri owner;

  friend bool operator==(const DataElement&, const DataElement&) = default;
};

enum class Role { Actual, Requirement, Assurance };
enum class ExpressionKind { Equals, LessOrEqual, GreaterOrEqual, Interval };

std::string_view to_string(Role role) noexcept;
std::optional<Role> role_from_string(std::string_view text) noexcept;
std::string_view to_string(ExpressionKind kind) noexcept;
std::optional<ExpressionKind> expression_kind_from_string(std::string_view text) noexcept;

// Closed value set over one datatype. Ordering expressions are numeric only.
struct Expression {
  ExpressionKind kind = ExpressionKind::Equals;
  Literal value;  // Equals/LessOrEqual/GreaterOrEqual operand; Interval lower bound
  Literal upper;  // Interval upper bound

  static Expression equals(Literal v) { return {ExpressionKind::Equals, std::move(v), {}}; }
  static Expression at_most(Literal v) { return {ExpressionKind::LessOrEqual, std::move(v), {}}; }
  static Expression at_least(Literal v) { return {ExpressionKind::GreaterOrEqual, std::move(v), {}}; }
  static Expression interval(Literal lo, Literal hi) { return {ExpressionKind::Interval, std::move(lo), std::move(hi)}; }

  Datatype datatype() const noexcept { return value.datatype(); }
  // Throws InvalidExpression (lo > hi, ordering on non-numeric values).
  void validate() const;
  bool contains(const Literal& v) const;
  // Every value of `inner` is also a value of this set.
  bool includes(const Expression& inner) const;

  friend bool operator==(const Expression&, const Expression&) = default;
};

struct InstanceDescription {
  Iri id;
  Iri type_description;
  std::optional<Iri> data_element;  // absent for free-standing requirements
  Role role = Role::Requirement;
  Expression expression;

  friend bool operator==(const InstanceDescription&, const InstanceDescription&) = default;
};

Iri define_type_description(KnowledgeBase& kb, const TypeDescription& td);
std::optional<TypeDescription> type_description(const KnowledgeBase& kb, const Iri& id);

Iri ensure_data_element(KnowledgeBase& kb, const Iri& owner, const Iri& td);
std::optional<Iri> data_element_of(const KnowledgeBase& kb, const Iri& owner, const Iri& td);
std::vector<DataElement> data_elements_of(const KnowledgeBase& kb, const Iri& owner);

// Creates the owner's data element for `td` when absent and links `inst` to it.
// An empty inst.id gets a generated one. Returns the instance id.
Iri attach(KnowledgeBase& kb, const Iri& owner, const Iri& td, InstanceDescription inst);

// Writes a free-standing instance description (no data element), as used by
// mission requirements.
void write_instance_description(KnowledgeBase& kb, const InstanceDescription& inst);
InstanceDescription read_instance_description(const KnowledgeBase& kb, const Iri& id);
std::vector<InstanceDescription> instance_descriptions_of(const KnowledgeBase& kb, const Iri& owner);

// Requirement vs. Assurance: the requirement's value set is contained in the
// assurance's. Requirement vs. Actual: the actual value lies in the
// requirement's set.
bool satisfies(const InstanceDescription& requirement, const InstanceDescription& offer);

}  // namespace aurcap::property
