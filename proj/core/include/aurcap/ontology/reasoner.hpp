#pragma once

#include <cstdint>
#include <set>
#include <unordered_map>
#include <vector>

#include "aurcap/ontology/iri.hpp"

namespace aurcap {

class KnowledgeBase;

// Closure-based reasoner over the supported axiom forms:
//   - SubClassOf and EquivalentClass form a graph whose strongly connected
//     components are equivalence nodes (subclass cycles merge);
//   - SubPropertyOf is closed reflexively and transitively;
//   - "exists P.C SubClassOf D" classifies x as D when x has a P-link (or a
//     link through a subproperty of P) to an instance of C. Applied to a
//     fixpoint.
//
// Built once from a snapshot; immutable and safe to share between threads.
class Reasoner {
 public:
  explicit Reasoner(const KnowledgeBase& kb);

  bool is_subclass_of(const Iri& sub, const Iri& super) const;
  std::set<Iri> equivalence_class_of(const Iri& cls) const;
  std::set<Iri> superclasses_of(const Iri& cls) const;  // reflexive
  std::set<Iri> subclasses_of(const Iri& cls) const;    // reflexive
  std::set<Iri> instances_of(const Iri& cls) const;
  bool is_instance_of(const Iri& individual, const Iri& cls) const;
  std::set<Iri> types_of(const Iri& individual) const;  // every inferred class
  bool is_subproperty_of(const Iri& sub, const Iri& super) const;

  std::size_t class_count() const noexcept { return class_names_.size(); }
  std::size_t node_count() const noexcept { return node_members_.size(); }

 private:
  class Bits {
   public:
    void resize(std::size_t n) { words_.assign((n + 63) / 64, 0); }
    void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
    bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }
    // returns true when any bit changed
    bool merge(const Bits& other) {
      bool changed = false;
      for (std::size_t i = 0; i < words_.size(); ++i) {
        const auto next = words_[i] | other.words_[i];
        changed |= next != words_[i];
        words_[i] = next;
      }
      return changed;
    }

   private:
    std::vector<std::uint64_t> words_;
  };

  std::size_t class_index(const Iri& cls) const;  // throws UnknownTerm
  std::size_t node_of(const Iri& cls) const { return class_node_[class_index(cls)]; }

  std::unordered_map<Iri, std::size_t> class_ids_;
  std::vector<Iri> class_names_;
  std::vector<std::size_t> class_node_;
  std::vector<std::vector<std::size_t>> node_members_;
  std::vector<Bits> node_ancestors_;  // reflexive-transitive

  std::unordered_map<Iri, std::size_t> property_ids_;
  std::vector<Bits> property_ancestors_;

  std::vector<Iri> individuals_;
  std::unordered_map<Iri, std::size_t> individual_ids_;
  std::vector<Bits> individual_types_;  // upward-closed node sets
};

}  // namespace aurcap

namespace aurcap {

// Convenience queries through the knowledge base's cached reasoner. Terms must
// be declared classes; otherwise UnknownTerm.
bool is_subclass_of(const KnowledgeBase& kb, const Iri& sub, const Iri& super);
std::set<Iri> equivalence_class_of(const KnowledgeBase& kb, const Iri& cls);
std::set<Iri> instances_of(const KnowledgeBase& kb, const Iri& cls);
bool is_instance_of(const KnowledgeBase& kb, const Iri& individual, const Iri& cls);

}  // namespace aurcap
