#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "aurcap/ontology/knowledge_base.hpp"
#include "aurcap/property.hpp"

namespace aurcap::capability {

enum class IoKind { Product, Information, Energy };

std::string_view to_string(IoKind kind) noexcept;
std::optional<IoKind> io_kind_from_string(std::string_view text) noexcept;
const Iri& io_kind_class(IoKind kind) noexcept;

struct IoRole {
  IoKind kind = IoKind::Product;
  std::string state_label;
  friend bool operator==(const IoRole&, const IoRole&) = default;
};

using KindCounts = std::map<IoKind, int>;
KindCounts count_kinds(const std::vector<IoRole>& roles);

struct CapabilityDescription {
  Iri id;
  Iri capability_type;
  std::vector<IoRole> inputs;
  std::vector<IoRole> outputs;
  std::vector<Iri> sub_operators;
  // Attached to the capability after it is defined. Each needs its
  // type_description set.
  std::vector<property::InstanceDescription> constraints;
};

// Throws UnknownCapabilityType, CyclicDecomposition, UnknownCapability,
// SignatureMismatch, DuplicateId. Leaves the KB untouched on failure.
Iri define_capability(KnowledgeBase& kb, const CapabilityDescription& desc);

bool is_capability(const KnowledgeBase& kb, const Iri& id);
CapabilityDescription describe_capability(const KnowledgeBase& kb, const Iri& id);
// Most specific asserted capability class.
Iri capability_type_of(const KnowledgeBase& kb, const Iri& id);
std::vector<IoRole> inputs_of(const KnowledgeBase& kb, const Iri& id);
std::vector<IoRole> outputs_of(const KnowledgeBase& kb, const Iri& id);
std::vector<Iri> sub_operators_of(const KnowledgeBase& kb, const Iri& id);

// External signature of a sequential chain: every input is fed from the pool
// of earlier outputs when a matching kind is available, otherwise it is an
// external input; outputs left in the pool are external outputs.
struct Signature {
  KindCounts inputs;
  KindCounts outputs;
  friend bool operator==(const Signature&, const Signature&) = default;
};
Signature chain_signature(const KnowledgeBase& kb, const std::vector<Iri>& sub_operators);

ObjectLink provides_capability(KnowledgeBase& kb, const Iri& resource, const Iri& capability);
std::vector<Iri> providers_of(const KnowledgeBase& kb, const Iri& capability);
std::vector<Iri> provided_by(const KnowledgeBase& kb, const Iri& resource);

// Throws UnknownTerm unless t is ProcessOperator or below it.
std::set<Iri> capabilities_of_type(const KnowledgeBase& kb, const Iri& type);

std::vector<Iri> flatten(const KnowledgeBase& kb, const Iri& capability);

// Checks decomposition acyclicity over the whole KB (models loaded from files).
void check_decompositions(const KnowledgeBase& kb);

}  // namespace aurcap::capability
