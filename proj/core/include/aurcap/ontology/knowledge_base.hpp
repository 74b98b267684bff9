#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <tuple>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "aurcap/ontology/iri.hpp"
#include "aurcap/ontology/literal.hpp"

namespace aurcap {

class Reasoner;

enum class AxiomKind { SubClassOf, EquivalentClass, SubPropertyOf, ExistentialRestrictionSubClass };

std::string_view to_string(AxiomKind kind) noexcept;

// Class-level axiom. For ExistentialRestrictionSubClass the axiom reads
// "exists on_property.subject SubClassOf object".
struct Axiom {
  AxiomKind kind = AxiomKind::SubClassOf;
  Iri subject;
  Iri object;
  std::optional<Iri> on_property;

  static Axiom sub_class(Iri sub, Iri super) { return {AxiomKind::SubClassOf, std::move(sub), std::move(super), {}}; }
  static Axiom equivalent(Iri a, Iri b) { return {AxiomKind::EquivalentClass, std::move(a), std::move(b), {}}; }
  static Axiom sub_property(Iri sub, Iri super) {
    return {AxiomKind::SubPropertyOf, std::move(sub), std::move(super), {}};
  }
  static Axiom existential(Iri property, Iri filler, Iri super) {
    return {AxiomKind::ExistentialRestrictionSubClass, std::move(filler), std::move(super), std::move(property)};
  }

  // Throws InvalidAxiom when on_property presence disagrees with the kind.
  void validate() const;

  friend auto operator<=>(const Axiom&, const Axiom&) = default;
  friend bool operator==(const Axiom&, const Axiom&) = default;
};

struct ClassAssertion {
  Iri individual;
  Iri cls;
  friend auto operator<=>(const ClassAssertion&, const ClassAssertion&) = default;
  friend bool operator==(const ClassAssertion&, const ClassAssertion&) = default;
};

struct ObjectLink {
  Iri subject;
  Iri property;
  Iri object;
  friend auto operator<=>(const ObjectLink&, const ObjectLink&) = default;
  friend bool operator==(const ObjectLink&, const ObjectLink&) = default;
};

struct DataLink {
  Iri subject;
  Iri property;
  Literal value;
  friend auto operator<=>(const DataLink&, const DataLink&) = default;
  friend bool operator==(const DataLink&, const DataLink&) = default;
};

using InstanceAssertion = std::variant<ClassAssertion, ObjectLink, DataLink>;

enum class TermKind : std::uint8_t {
  Class = 1,
  ObjectProperty = 2,
  DataProperty = 4,
  Individual = 8,
};

// Ontology store: prefixes, axioms, assertions and the declared vocabulary.
// Adding an axiom or assertion declares every term it references.
//
// Const member functions may be called concurrently; mutation requires
// exclusive access. The reasoner is built lazily and cached until the next
// mutation.
class KnowledgeBase {
 public:
  using Vocabulary = std::map<Iri, std::uint8_t>;

  // Starts with the rdf, rdfs, owl and xsd prefixes.
  KnowledgeBase();
  KnowledgeBase(const KnowledgeBase& other);
  KnowledgeBase& operator=(const KnowledgeBase& other);
  KnowledgeBase(KnowledgeBase&& other) noexcept;
  KnowledgeBase& operator=(KnowledgeBase&& other) noexcept;
  ~KnowledgeBase();

  // prefixes
  void set_prefix(const std::string& name, const std::string& ns);
  const std::map<std::string, std::string>& prefixes() const noexcept { return prefixes_; }
  // Accepts "<full>", "prefix:local" or an absolute IRI.
  std::optional<Iri> expand(std::string_view text) const;
  Iri resolve(std::string_view text) const;  // throws UnknownTerm
  std::string compact(const Iri& iri) const;

  // vocabulary
  void declare(const Iri& iri, TermKind kind);
  bool has(const Iri& iri) const;
  bool has(const Iri& iri, TermKind kind) const;
  bool is_class(const Iri& iri) const { return has(iri, TermKind::Class); }
  bool is_individual(const Iri& iri) const { return has(iri, TermKind::Individual); }
  const Vocabulary& vocabulary() const noexcept { return vocabulary_; }
  std::vector<Iri> terms(TermKind kind) const;

  // statements; return false when already present
  bool add(const Axiom& axiom);
  bool add(const InstanceAssertion& assertion);
  bool add_type(const Iri& individual, const Iri& cls) { return add(ClassAssertion{individual, cls}); }
  bool add_link(const Iri& s, const Iri& p, const Iri& o) { return add(ObjectLink{s, p, o}); }
  bool add_value(const Iri& s, const Iri& p, Literal v) { return add(DataLink{s, p, std::move(v)}); }
  bool remove(const InstanceAssertion& assertion);
  // Removes every object and data link (subject, property, *).
  std::size_t remove_links(const Iri& subject, const Iri& property);

  const std::set<Axiom>& axioms() const noexcept { return axioms_; }
  const std::set<InstanceAssertion>& assertions() const noexcept { return assertions_; }
  bool contains(const Axiom& axiom) const { return axioms_.contains(axiom); }
  bool contains(const InstanceAssertion& a) const { return assertions_.contains(a); }

  // lookups over asserted statements only
  std::vector<Iri> asserted_types(const Iri& individual) const;
  std::vector<Iri> objects(const Iri& subject, const Iri& property) const;
  std::optional<Iri> object(const Iri& subject, const Iri& property) const;
  std::vector<Literal> values(const Iri& subject, const Iri& property) const;
  std::optional<Literal> value(const Iri& subject, const Iri& property) const;
  std::vector<Iri> subjects(const Iri& property, const Iri& object) const;
  std::vector<Iri> asserted_individuals(const Iri& cls) const;

  void merge(const KnowledgeBase& other);

  std::shared_ptr<const Reasoner> reasoner() const;

  // Set equality over prefixes, vocabulary, axioms and assertions.
  friend bool operator==(const KnowledgeBase& a, const KnowledgeBase& b);

 private:
  void invalidate() noexcept;
  void index(const InstanceAssertion& a);
  void unindex(const InstanceAssertion& a);

  std::map<std::string, std::string> prefixes_;
  Vocabulary vocabulary_;
  std::set<Axiom> axioms_;
  std::set<InstanceAssertion> assertions_;
  // (property, object, subject) for object links and (empty, class,
  // individual) for class assertions; serves subjects() and
  // asserted_individuals()
  std::set<std::tuple<Iri, Iri, Iri>> incoming_;

  mutable std::mutex cache_mutex_;
  mutable std::shared_ptr<const Reasoner> reasoner_;
};

}  // namespace aurcap
