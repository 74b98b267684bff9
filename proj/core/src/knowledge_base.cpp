#include "aurcap/ontology/knowledge_base.hpp"

#include <algorithm>
#include <cctype>

#include "aurcap/error.hpp"
#include "aurcap/ontology/namespaces.hpp"
#include "aurcap/ontology/reasoner.hpp"
#include "aurcap/ontology/turtle.hpp"

namespace aurcap {

std::string_view to_string(AxiomKind kind) noexcept {
  switch (kind) {
    case AxiomKind::SubClassOf: return "SubClassOf";
    case AxiomKind::EquivalentClass: return "EquivalentClass";
    case AxiomKind::SubPropertyOf: return "SubPropertyOf";
    case AxiomKind::ExistentialRestrictionSubClass: return "ExistentialRestrictionSubClass";
  }
  return "SubClassOf";
}

void Axiom::validate() const {
  const bool needs_property = kind == AxiomKind::ExistentialRestrictionSubClass;
  if (needs_property != on_property.has_value())
    throw Error(Errc::InvalidAxiom, std::string(to_string(kind)) +
                                        (needs_property ? " requires onProperty" : " must not carry onProperty"));
  if (subject.empty() || object.empty()) throw Error(Errc::InvalidAxiom, "axiom with empty term");
}

KnowledgeBase::KnowledgeBase() {
  prefixes_ = {{"rdf", ns::rdf}, {"rdfs", ns::rdfs}, {"owl", ns::owl}, {"xsd", ns::xsd}};
}

KnowledgeBase::KnowledgeBase(const KnowledgeBase& other)
    : prefixes_(other.prefixes_),
      vocabulary_(other.vocabulary_),
      axioms_(other.axioms_),
      assertions_(other.assertions_),
      incoming_(other.incoming_) {}

KnowledgeBase& KnowledgeBase::operator=(const KnowledgeBase& other) {
  if (this != &other) {
    prefixes_ = other.prefixes_;
    vocabulary_ = other.vocabulary_;
    axioms_ = other.axioms_;
    assertions_ = other.assertions_;
    incoming_ = other.incoming_;
    invalidate();
  }
  return *this;
}

KnowledgeBase::KnowledgeBase(KnowledgeBase&& other) noexcept
    : prefixes_(std::move(other.prefixes_)),
      vocabulary_(std::move(other.vocabulary_)),
      axioms_(std::move(other.axioms_)),
      assertions_(std::move(other.assertions_)),
      incoming_(std::move(other.incoming_)) {
  other.invalidate();
}

KnowledgeBase& KnowledgeBase::operator=(KnowledgeBase&& other) noexcept {
  if (this != &other) {
    prefixes_ = std::move(other.prefixes_);
    vocabulary_ = std::move(other.vocabulary_);
    axioms_ = std::move(other.axioms_);
    assertions_ = std::move(other.assertions_);
    incoming_ = std::move(other.incoming_);
    invalidate();
    other.invalidate();
  }
  return *this;
}

KnowledgeBase::~KnowledgeBase() = default;

void KnowledgeBase::invalidate() noexcept {
  std::lock_guard lock(cache_mutex_);
  reasoner_.reset();
}

void KnowledgeBase::set_prefix(const std::string& name, const std::string& ns) {
  const bool name_ok =
      name.empty() || (std::isalpha(static_cast<unsigned char>(name.front())) && name.back() != '.' &&
                       std::all_of(name.begin(), name.end(), [](char c) {
                         return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
                       }));
  if (!name_ok) throw Error(Errc::InvalidIri, "invalid prefix name '" + name + "'");
  if (!Iri::is_valid(ns)) throw Error(Errc::InvalidIri, "prefix '" + name + "' maps to '" + ns + "'");
  prefixes_[name] = ns;
}

std::optional<Iri> KnowledgeBase::expand(std::string_view text) const {
  if (text.size() >= 2 && text.front() == '<' && text.back() == '>') {
    text = text.substr(1, text.size() - 2);
    if (!Iri::is_valid(text)) return std::nullopt;
    return Iri(std::string(text));
  }
  const auto colon = text.find(':');
  if (colon != std::string_view::npos) {
    if (auto it = prefixes_.find(std::string(text.substr(0, colon))); it != prefixes_.end()) {
      std::string full = it->second + std::string(text.substr(colon + 1));
      if (Iri::is_valid(full)) return Iri(std::move(full));
      return std::nullopt;
    }
  }
  if (Iri::is_valid(text)) return Iri(std::string(text));
  return std::nullopt;
}

Iri KnowledgeBase::resolve(std::string_view text) const {
  auto iri = expand(text);
  if (!iri) throw Error(Errc::UnknownTerm, "cannot resolve '" + std::string(text) + "'");
  return *iri;
}

std::string KnowledgeBase::compact(const Iri& iri) const {
  const std::string& s = iri.str();
  const std::string* best_name = nullptr;
  std::size_t best_len = 0;
  for (const auto& [name, ns] : prefixes_) {
    if (ns.size() > best_len && s.size() > ns.size() && s.compare(0, ns.size(), ns) == 0 &&
        is_turtle_local_name(std::string_view(s).substr(ns.size()))) {
      best_name = &name;
      best_len = ns.size();
    }
  }
  if (best_name == nullptr) return "<" + s + ">";
  return *best_name + ":" + s.substr(best_len);
}

void KnowledgeBase::declare(const Iri& iri, TermKind kind) {
  if (iri.empty()) throw Error(Errc::InvalidIri, "empty IRI");
  auto& flags = vocabulary_[iri];
  const auto before = flags;
  flags |= static_cast<std::uint8_t>(kind);
  if (flags != before) invalidate();
}

bool KnowledgeBase::has(const Iri& iri) const { return vocabulary_.contains(iri); }

bool KnowledgeBase::has(const Iri& iri, TermKind kind) const {
  auto it = vocabulary_.find(iri);
  return it != vocabulary_.end() && (it->second & static_cast<std::uint8_t>(kind)) != 0;
}

std::vector<Iri> KnowledgeBase::terms(TermKind kind) const {
  std::vector<Iri> out;
  for (const auto& [iri, flags] : vocabulary_)
    if (flags & static_cast<std::uint8_t>(kind)) out.push_back(iri);
  return out;
}

bool KnowledgeBase::add(const Axiom& axiom) {
  axiom.validate();
  switch (axiom.kind) {
    case AxiomKind::SubClassOf:
    case AxiomKind::EquivalentClass:
      declare(axiom.subject, TermKind::Class);
      declare(axiom.object, TermKind::Class);
      break;
    case AxiomKind::SubPropertyOf:
      for (const Iri* p : {&axiom.subject, &axiom.object}) {
        if (!has(*p, TermKind::ObjectProperty) && !has(*p, TermKind::DataProperty))
          declare(*p, TermKind::ObjectProperty);
      }
      break;
    case AxiomKind::ExistentialRestrictionSubClass:
      declare(axiom.subject, TermKind::Class);
      declare(axiom.object, TermKind::Class);
      declare(*axiom.on_property, TermKind::ObjectProperty);
      break;
  }
  const bool inserted = axioms_.insert(axiom).second;
  if (inserted) invalidate();
  return inserted;
}

bool KnowledgeBase::add(const InstanceAssertion& assertion) {
  std::visit(
      [this](const auto& a) {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, ClassAssertion>) {
          declare(a.individual, TermKind::Individual);
          declare(a.cls, TermKind::Class);
        } else if constexpr (std::is_same_v<T, ObjectLink>) {
          declare(a.subject, TermKind::Individual);
          declare(a.property, TermKind::ObjectProperty);
          declare(a.object, TermKind::Individual);
        } else {
          declare(a.subject, TermKind::Individual);
          declare(a.property, TermKind::DataProperty);
        }
      },
      assertion);
  const bool inserted = assertions_.insert(assertion).second;
  if (inserted) {
    index(assertion);
    invalidate();
  }
  return inserted;
}

bool KnowledgeBase::remove(const InstanceAssertion& assertion) {
  const bool erased = assertions_.erase(assertion) > 0;
  if (erased) {
    unindex(assertion);
    invalidate();
  }
  return erased;
}

std::size_t KnowledgeBase::remove_links(const Iri& subject, const Iri& property) {
  std::size_t n = 0;
  for (auto it = assertions_.lower_bound(ObjectLink{subject, property, Iri{}}); it != assertions_.end();) {
    const auto* link = std::get_if<ObjectLink>(&*it);
    if (link == nullptr || link->subject != subject || link->property != property) break;
    unindex(*it);
    it = assertions_.erase(it);
    ++n;
  }
  for (auto it = assertions_.lower_bound(DataLink{subject, property, Literal{}}); it != assertions_.end();) {
    const auto* link = std::get_if<DataLink>(&*it);
    if (link == nullptr || link->subject != subject || link->property != property) break;
    it = assertions_.erase(it);
    ++n;
  }
  if (n > 0) invalidate();
  return n;
}

std::vector<Iri> KnowledgeBase::asserted_types(const Iri& individual) const {
  std::vector<Iri> out;
  for (auto it = assertions_.lower_bound(ClassAssertion{individual, Iri{}}); it != assertions_.end(); ++it) {
    const auto* ca = std::get_if<ClassAssertion>(&*it);
    if (ca == nullptr || ca->individual != individual) break;
    out.push_back(ca->cls);
  }
  return out;
}

std::vector<Iri> KnowledgeBase::objects(const Iri& subject, const Iri& property) const {
  std::vector<Iri> out;
  for (auto it = assertions_.lower_bound(ObjectLink{subject, property, Iri{}}); it != assertions_.end(); ++it) {
    const auto* link = std::get_if<ObjectLink>(&*it);
    if (link == nullptr || link->subject != subject || link->property != property) break;
    out.push_back(link->object);
  }
  return out;
}

std::optional<Iri> KnowledgeBase::object(const Iri& subject, const Iri& property) const {
  auto all = objects(subject, property);
  if (all.empty()) return std::nullopt;
  return all.front();
}

std::vector<Literal> KnowledgeBase::values(const Iri& subject, const Iri& property) const {
  std::vector<Literal> out;
  for (auto it = assertions_.lower_bound(DataLink{subject, property, Literal{}}); it != assertions_.end(); ++it) {
    const auto* link = std::get_if<DataLink>(&*it);
    if (link == nullptr || link->subject != subject || link->property != property) break;
    out.push_back(link->value);
  }
  return out;
}

std::optional<Literal> KnowledgeBase::value(const Iri& subject, const Iri& property) const {
  auto all = values(subject, property);
  if (all.empty()) return std::nullopt;
  return all.front();
}

namespace {

std::vector<Iri> incoming(const std::set<std::tuple<Iri, Iri, Iri>>& idx, const Iri& property, const Iri& object) {
  std::vector<Iri> out;
  for (auto it = idx.lower_bound({property, object, Iri{}}); it != idx.end(); ++it) {
    if (std::get<0>(*it) != property || std::get<1>(*it) != object) break;
    out.push_back(std::get<2>(*it));
  }
  return out;
}

}  // namespace

std::vector<Iri> KnowledgeBase::subjects(const Iri& property, const Iri& object) const {
  return incoming(incoming_, property, object);
}

std::vector<Iri> KnowledgeBase::asserted_individuals(const Iri& cls) const { return incoming(incoming_, Iri{}, cls); }

void KnowledgeBase::index(const InstanceAssertion& a) {
  if (const auto* link = std::get_if<ObjectLink>(&a))
    incoming_.emplace(link->property, link->object, link->subject);
  else if (const auto* ca = std::get_if<ClassAssertion>(&a))
    incoming_.emplace(Iri{}, ca->cls, ca->individual);
}

void KnowledgeBase::unindex(const InstanceAssertion& a) {
  if (const auto* link = std::get_if<ObjectLink>(&a))
    incoming_.erase({link->property, link->object, link->subject});
  else if (const auto* ca = std::get_if<ClassAssertion>(&a))
    incoming_.erase({Iri{}, ca->cls, ca->individual});
}

void KnowledgeBase::merge(const KnowledgeBase& other) {
  for (const auto& [name, ns] : other.prefixes_) prefixes_.insert_or_assign(name, ns);
  for (const auto& [iri, flags] : other.vocabulary_) vocabulary_[iri] |= flags;
  axioms_.insert(other.axioms_.begin(), other.axioms_.end());
  assertions_.insert(other.assertions_.begin(), other.assertions_.end());
  incoming_.insert(other.incoming_.begin(), other.incoming_.end());
  invalidate();
}

std::shared_ptr<const Reasoner> KnowledgeBase::reasoner() const {
  std::lock_guard lock(cache_mutex_);
  if (!reasoner_) reasoner_ = std::make_shared<const Reasoner>(*this);
  return reasoner_;
}

bool operator==(const KnowledgeBase& a, const KnowledgeBase& b) {
  return a.prefixes_ == b.prefixes_ && a.vocabulary_ == b.vocabulary_ && a.axioms_ == b.axioms_ &&
         a.assertions_ == b.assertions_;
}

}  // namespace aurcap
