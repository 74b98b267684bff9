#include "aurcap/ontology/reasoner.hpp"

#include <algorithm>
#include <functional>

#include "aurcap/error.hpp"
#include "aurcap/ontology/knowledge_base.hpp"

namespace aurcap {

namespace {

// Iterative Tarjan. Components are emitted in reverse topological order: every
// component reachable from C is emitted before C.
std::vector<std::size_t> strongly_connected(const std::vector<std::vector<std::size_t>>& adj,
                                            std::size_t& component_count) {
  const std::size_t n = adj.size();
  constexpr std::size_t unvisited = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, unvisited), low(n, 0), comp(n, unvisited);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::size_t next_index = 0;
  component_count = 0;

  struct Frame {
    std::size_t node;
    std::size_t edge;
  };
  std::vector<Frame> call;
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != unvisited) continue;
    call.push_back({root, 0});
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      auto& frame = call.back();
      const std::size_t v = frame.node;
      if (frame.edge < adj[v].size()) {
        const std::size_t w = adj[v][frame.edge++];
        if (index[w] == unvisited) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = component_count;
        } while (w != v);
        ++component_count;
      }
      call.pop_back();
      if (!call.empty()) {
        const std::size_t parent = call.back().node;
        low[parent] = std::min(low[parent], low[v]);
      }
    }
  }
  return comp;
}

}  // namespace

Reasoner::Reasoner(const KnowledgeBase& kb) {
  for (const auto& [iri, flags] : kb.vocabulary()) {
    if (flags & static_cast<std::uint8_t>(TermKind::Class)) {
      class_ids_.emplace(iri, class_names_.size());
      class_names_.push_back(iri);
    }
    if (flags & (static_cast<std::uint8_t>(TermKind::ObjectProperty) | static_cast<std::uint8_t>(TermKind::DataProperty)))
      property_ids_.emplace(iri, property_ids_.size());
    if (flags & static_cast<std::uint8_t>(TermKind::Individual)) {
      individual_ids_.emplace(iri, individuals_.size());
      individuals_.push_back(iri);
    }
  }

  // class graph
  const std::size_t n = class_names_.size();
  std::vector<std::vector<std::size_t>> adj(n);
  std::vector<std::vector<std::size_t>> prop_adj(property_ids_.size());
  for (const auto& ax : kb.axioms()) {
    switch (ax.kind) {
      case AxiomKind::SubClassOf:
        adj[class_ids_.at(ax.subject)].push_back(class_ids_.at(ax.object));
        break;
      case AxiomKind::EquivalentClass:
        adj[class_ids_.at(ax.subject)].push_back(class_ids_.at(ax.object));
        adj[class_ids_.at(ax.object)].push_back(class_ids_.at(ax.subject));
        break;
      case AxiomKind::SubPropertyOf:
        prop_adj[property_ids_.at(ax.subject)].push_back(property_ids_.at(ax.object));
        break;
      case AxiomKind::ExistentialRestrictionSubClass:
        break;
    }
  }

  std::size_t node_count = 0;
  class_node_ = strongly_connected(adj, node_count);
  node_members_.assign(node_count, {});
  for (std::size_t c = 0; c < n; ++c) node_members_[class_node_[c]].push_back(c);

  std::vector<std::vector<std::size_t>> node_succ(node_count);
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t d : adj[c])
      if (class_node_[c] != class_node_[d]) node_succ[class_node_[c]].push_back(class_node_[d]);

  node_ancestors_.assign(node_count, {});
  for (std::size_t k = 0; k < node_count; ++k) {
    // successors have smaller component ids (reverse topological emission)
    node_ancestors_[k].resize(node_count);
    node_ancestors_[k].set(k);
    for (std::size_t s : node_succ[k]) node_ancestors_[k].merge(node_ancestors_[s]);
  }

  // property closure
  std::size_t prop_nodes = 0;
  const auto prop_comp = strongly_connected(prop_adj, prop_nodes);
  std::vector<Bits> comp_anc(prop_nodes);
  std::vector<std::vector<std::size_t>> comp_members(prop_nodes);
  for (std::size_t p = 0; p < prop_adj.size(); ++p) comp_members[prop_comp[p]].push_back(p);
  for (std::size_t k = 0; k < prop_nodes; ++k) {
    comp_anc[k].resize(prop_adj.size());
    for (std::size_t p : comp_members[k]) {
      comp_anc[k].set(p);
      for (std::size_t q : prop_adj[p])
        if (prop_comp[q] != k) comp_anc[k].merge(comp_anc[prop_comp[q]]);
    }
  }
  property_ancestors_.resize(prop_adj.size());
  for (std::size_t p = 0; p < prop_adj.size(); ++p) property_ancestors_[p] = comp_anc[prop_comp[p]];

  // individual typing
  individual_types_.assign(individuals_.size(), {});
  for (auto& bits : individual_types_) bits.resize(node_count);
  struct Link {
    std::size_t subject;
    std::size_t property;
    std::size_t object;
  };
  std::vector<Link> links;
  for (const auto& a : kb.assertions()) {
    if (const auto* ca = std::get_if<ClassAssertion>(&a)) {
      individual_types_[individual_ids_.at(ca->individual)].merge(node_ancestors_[class_node_[class_ids_.at(ca->cls)]]);
    } else if (const auto* ol = std::get_if<ObjectLink>(&a)) {
      links.push_back({individual_ids_.at(ol->subject), property_ids_.at(ol->property), individual_ids_.at(ol->object)});
    }
  }

  struct Restriction {
    std::size_t property;
    std::size_t filler_node;
    std::size_t super_node;
  };
  std::vector<Restriction> restrictions;
  for (const auto& ax : kb.axioms()) {
    if (ax.kind == AxiomKind::ExistentialRestrictionSubClass)
      restrictions.push_back({property_ids_.at(*ax.on_property), class_node_[class_ids_.at(ax.subject)],
                              class_node_[class_ids_.at(ax.object)]});
  }
  if (!restrictions.empty()) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& r : restrictions) {
        for (const auto& l : links) {
          if (!property_ancestors_[l.property].test(r.property)) continue;
          if (!individual_types_[l.object].test(r.filler_node)) continue;
          if (individual_types_[l.subject].test(r.super_node)) continue;
          individual_types_[l.subject].merge(node_ancestors_[r.super_node]);
          changed = true;
        }
      }
    }
  }
}

std::size_t Reasoner::class_index(const Iri& cls) const {
  auto it = class_ids_.find(cls);
  if (it == class_ids_.end()) throw Error(Errc::UnknownTerm, "not a declared class: " + cls.str());
  return it->second;
}

bool Reasoner::is_subclass_of(const Iri& sub, const Iri& super) const {
  const auto a = node_of(sub);
  const auto b = node_of(super);
  return node_ancestors_[a].test(b);
}

std::set<Iri> Reasoner::equivalence_class_of(const Iri& cls) const {
  std::set<Iri> out;
  for (std::size_t m : node_members_[node_of(cls)]) out.insert(class_names_[m]);
  return out;
}

std::set<Iri> Reasoner::superclasses_of(const Iri& cls) const {
  const auto& anc = node_ancestors_[node_of(cls)];
  std::set<Iri> out;
  for (std::size_t k = 0; k < node_members_.size(); ++k)
    if (anc.test(k))
      for (std::size_t m : node_members_[k]) out.insert(class_names_[m]);
  return out;
}

std::set<Iri> Reasoner::subclasses_of(const Iri& cls) const {
  const auto target = node_of(cls);
  std::set<Iri> out;
  for (std::size_t k = 0; k < node_members_.size(); ++k)
    if (node_ancestors_[k].test(target))
      for (std::size_t m : node_members_[k]) out.insert(class_names_[m]);
  return out;
}

std::set<Iri> Reasoner::instances_of(const Iri& cls) const {
  const auto target = node_of(cls);
  std::set<Iri> out;
  for (std::size_t i = 0; i < individuals_.size(); ++i)
    if (individual_types_[i].test(target)) out.insert(individuals_[i]);
  return out;
}

bool Reasoner::is_instance_of(const Iri& individual, const Iri& cls) const {
  const auto target = node_of(cls);
  auto it = individual_ids_.find(individual);
  if (it == individual_ids_.end()) return false;
  return individual_types_[it->second].test(target);
}

std::set<Iri> Reasoner::types_of(const Iri& individual) const {
  std::set<Iri> out;
  auto it = individual_ids_.find(individual);
  if (it == individual_ids_.end()) return out;
  const auto& bits = individual_types_[it->second];
  for (std::size_t k = 0; k < node_members_.size(); ++k)
    if (bits.test(k))
      for (std::size_t m : node_members_[k]) out.insert(class_names_[m]);
  return out;
}

bool Reasoner::is_subproperty_of(const Iri& sub, const Iri& super) const {
  auto a = property_ids_.find(sub);
  auto b = property_ids_.find(super);
  if (a == property_ids_.end()) throw Error(Errc::UnknownTerm, "not a declared property: " + sub.str());
  if (b == property_ids_.end()) throw Error(Errc::UnknownTerm, "not a declared property: " + super.str());
  return property_ancestors_[a->second].test(b->second);
}

}  // namespace aurcap

namespace aurcap {

bool is_subclass_of(const KnowledgeBase& kb, const Iri& sub, const Iri& super) {
  return kb.reasoner()->is_subclass_of(sub, super);
}

std::set<Iri> equivalence_class_of(const KnowledgeBase& kb, const Iri& cls) {
  return kb.reasoner()->equivalence_class_of(cls);
}

std::set<Iri> instances_of(const KnowledgeBase& kb, const Iri& cls) { return kb.reasoner()->instances_of(cls); }

bool is_instance_of(const KnowledgeBase& kb, const Iri& individual, const Iri& cls) {
  return kb.reasoner()->is_instance_of(individual, cls);
}

}  // namespace aurcap
