#pragma once

#include <istream>
#include <string>
#include <string_view>

#include "aurcap/ontology/knowledge_base.hpp"

namespace aurcap {

// Turtle subset:
//   @prefix declarations; triples with ';' and ',' lists; 'a' for rdf:type;
//   IRIs as <...> or prefixed names; "..."^^xsd:{string,integer,decimal,
//   boolean,anyURI} literals, plain strings, bare integers/decimals/booleans;
//   '#' comments.
// Recognised predicates: rdf:type, rdfs:subClassOf, owl:equivalentClass,
// rdfs:subPropertyOf and any predicate outside the rdf/rdfs/owl/xsd
// namespaces. 'x a owl:Class|owl:ObjectProperty|owl:DatatypeProperty|
// owl:NamedIndividual' declares vocabulary. The only blank node accepted is
//   [ a owl:Restriction ; owl:onProperty P ; owl:someValuesFrom C ] rdfs:subClassOf D .
// Anything else raises UnsupportedConstruct; malformed text raises SyntaxError.
KnowledgeBase parse_turtle(std::string_view text);
KnowledgeBase parse_turtle(std::istream& in);
// Parses into an existing knowledge base (its prefixes are in scope).
void parse_turtle_into(KnowledgeBase& kb, std::string_view text);

// Canonical, deterministic output: prefixes, declarations, axioms, then
// assertions, one statement per line in sorted order.
std::string serialize_turtle(const KnowledgeBase& kb);

bool is_turtle_local_name(std::string_view local) noexcept;

}  // namespace aurcap
