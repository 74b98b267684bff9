#pragma once

// Independent reference implementations used by the unit tests and the
// acceptance runner. None of them calls into the code under test except to
// build inputs.

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "aurcap/ontology/knowledge_base.hpp"
#include "aurcap/property.hpp"

namespace aurcap::oracle {

// ---- class hierarchy and Turtle

// Iterate-to-fixpoint boolean matrix closure. Equivalence edges count in both
// directions.
inline std::vector<std::vector<bool>> closure_oracle(std::size_t n, const std::vector<std::pair<int, int>>& sub,
                                              const std::vector<std::pair<int, int>>& eq) {
  std::vector<std::vector<bool>> m(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = true;
  for (auto [a, b] : sub) m[a][b] = true;
  for (auto [a, b] : eq) m[a][b] = m[b][a] = true;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (m[i][j])
          for (std::size_t k = 0; k < n; ++k)
            if (m[j][k] && !m[i][k]) m[i][k] = changed = true;
  }
  return m;
}

inline Iri cls(int i) { return Iri("https://example.org/t#C" + std::to_string(i)); }
inline Iri ind(int i) { return Iri("https://example.org/t#i" + std::to_string(i)); }
inline Iri prop(int i) { return Iri("https://example.org/t#p" + std::to_string(i)); }

struct RandomTaxonomy {
  std::size_t classes = 0;
  std::vector<std::pair<int, int>> sub, eq;
};

inline RandomTaxonomy random_taxonomy(std::mt19937& rng) {
  RandomTaxonomy t;
  t.classes = std::uniform_int_distribution<std::size_t>(2, 50)(rng);
  const int axioms = std::uniform_int_distribution<int>(0, 200)(rng);
  std::uniform_int_distribution<int> pick(0, static_cast<int>(t.classes) - 1);
  std::bernoulli_distribution equivalence(0.1);
  for (int i = 0; i < axioms; ++i) (equivalence(rng) ? t.eq : t.sub).emplace_back(pick(rng), pick(rng));
  return t;
}

inline KnowledgeBase taxonomy_kb(const RandomTaxonomy& t) {
  KnowledgeBase kb;
  for (std::size_t i = 0; i < t.classes; ++i) kb.declare(cls(static_cast<int>(i)), TermKind::Class);
  for (auto [a, b] : t.sub) kb.add(Axiom::sub_class(cls(a), cls(b)));
  for (auto [a, b] : t.eq) kb.add(Axiom::equivalent(cls(a), cls(b)));
  return kb;
}

inline Literal random_literal(std::mt19937& rng) {
  switch (std::uniform_int_distribution<int>(0, 4)(rng)) {
    case 0: {
      static const char* samples[] = {"", "plain", "with \"quotes\"", "tab\tand\nnewline", "back\\slash", "Zürich # x"};
      return Literal::string(samples[std::uniform_int_distribution<int>(0, 5)(rng)]);
    }
    case 1: return Literal::integer(std::uniform_int_distribution<std::int64_t>(-1000000, 1000000)(rng));
    case 2: return Literal(Datatype::Decimal, std::to_string(std::uniform_int_distribution<int>(-999, 999)(rng)) + "." +
                                                  std::to_string(std::uniform_int_distribution<int>(0, 99)(rng)));
    case 3: return Literal::boolean(std::bernoulli_distribution(0.5)(rng));
    default: return Literal::iri(Iri("https://example.org/ref/" + std::to_string(rng() % 100)));
  }
}

inline KnowledgeBase random_kb(std::mt19937& rng) {
  KnowledgeBase kb;
  kb.set_prefix("t", "https://example.org/t#");
  if (rng() % 2) kb.set_prefix("u", "https://example.org/u/");
  const int statements = std::uniform_int_distribution<int>(0, 200)(rng);
  std::uniform_int_distribution<int> c(0, 15), i(0, 25), p(0, 5), kind(0, 7);
  for (int s = 0; s < statements; ++s) {
    switch (kind(rng)) {
      case 0: kb.add(Axiom::sub_class(cls(c(rng)), cls(c(rng)))); break;
      case 1: kb.add(Axiom::equivalent(cls(c(rng)), cls(c(rng)))); break;
      case 2: kb.add(Axiom::sub_property(prop(p(rng)), prop(p(rng)))); break;
      case 3: kb.add(Axiom::existential(prop(p(rng)), cls(c(rng)), cls(c(rng)))); break;
      case 4: kb.add_type(ind(i(rng)), cls(c(rng))); break;
      case 5: kb.add_link(ind(i(rng)), prop(p(rng)), ind(i(rng))); break;
      case 6: kb.add_value(ind(i(rng)), Iri("https://example.org/u/d" + std::to_string(p(rng))), random_literal(rng)); break;
      default: kb.declare(Iri("https://example.org/u/x" + std::to_string(i(rng))), TermKind::Individual); break;
    }
  }
  return kb;
}

// ---- property value sets

inline property::Expression random_expression(std::mt19937& rng) {
  std::uniform_int_distribution<int> v(-20, 20);
  using property::Expression;
  switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
    case 0: return Expression::equals(Literal::integer(v(rng)));
    case 1: return Expression::at_most(Literal::integer(v(rng)));
    case 2: return Expression::at_least(Literal::integer(v(rng)));
    default: {
      int a = v(rng), b = v(rng);
      if (a > b) std::swap(a, b);
      return Expression::interval(Literal::integer(a), Literal::integer(b));
    }
  }
}

// Membership by the textual definition of each expression form.
inline bool member(const property::Expression& e, long x) {
  const double v = std::stod(e.value.lexical());
  switch (e.kind) {
    case property::ExpressionKind::Equals: return x == v;
    case property::ExpressionKind::LessOrEqual: return x <= v;
    case property::ExpressionKind::GreaterOrEqual: return x >= v;
    case property::ExpressionKind::Interval: return v <= x && x <= std::stod(e.upper.lexical());
  }
  return false;
}

// Integer operands within [lo + 1, hi - 1]; the two outermost grid points
// stand in for the unbounded tails.
inline bool subset_on_grid(const property::Expression& inner, const property::Expression& outer, long lo = -21,
                           long hi = 21) {
  for (long x = lo; x <= hi; ++x)
    if (member(inner, x) && !member(outer, x)) return false;
  return true;
}

// ---- skill state machine

// The transition table, written out edge by edge.
inline const std::map<std::pair<std::string, std::string>, std::string>& command_edges() {
  static const auto table = [] {
    const std::vector<std::string> states = {"Idle",      "Starting",  "Execute",      "Completing",
                                             "Completed", "Holding",   "Held",         "Unholding",
                                             "Suspending", "Suspended", "Unsuspending", "Stopping",
                                             "Stopped",   "Aborting",  "Aborted",      "Resetting"};
    std::map<std::pair<std::string, std::string>, std::string> t;
    t[{"Idle", "start"}] = "Starting";
    t[{"Execute", "hold"}] = "Holding";
    t[{"Held", "unhold"}] = "Unholding";
    t[{"Execute", "suspend"}] = "Suspending";
    t[{"Suspended", "unsuspend"}] = "Unsuspending";
    for (const auto& s : states) {
      if (s != "Aborting" && s != "Aborted") t[{s, "abort"}] = "Aborting";
      if (s != "Aborting" && s != "Aborted" && s != "Stopping" && s != "Stopped") t[{s, "stop"}] = "Stopping";
    }
    t[{"Completed", "reset"}] = "Resetting";
    t[{"Stopped", "reset"}] = "Resetting";
    t[{"Aborted", "reset"}] = "Resetting";
    return t;
  }();
  return table;
}

inline const std::map<std::string, std::string> automatic = {
    {"Starting", "Execute"},  {"Completing", "Completed"}, {"Holding", "Held"},     {"Unholding", "Execute"},
    {"Suspending", "Suspended"}, {"Unsuspending", "Execute"}, {"Stopping", "Stopped"}, {"Aborting", "Aborted"},
    {"Resetting", "Idle"}};

// Oracle trajectory for a body that never returns by itself.
inline std::optional<std::vector<std::string>> oracle_apply(std::string& state, const std::string& cmd) {
  auto it = command_edges().find({state, cmd});
  if (it == command_edges().end()) return std::nullopt;
  std::vector<std::string> trail{it->second};
  state = it->second;
  for (auto a = automatic.find(state); a != automatic.end(); a = automatic.find(state)) {
    state = a->second;
    trail.push_back(state);
  }
  return trail;
}

}  // namespace aurcap::oracle
