#include <doctest.h>

#include <random>

#include "aurcap/error.hpp"
#include "aurcap/models.hpp"
#include "aurcap/ontology/namespaces.hpp"
#include "aurcap/ontology/turtle.hpp"
#include "aurcap/property.hpp"
#include "oracles.hpp"

using namespace aurcap;
using namespace aurcap::property;
using namespace aurcap::oracle;

namespace {

Iri ex(const std::string& local) { return Iri("https://example.org/p#" + local); }

const Iri maxAltitude = ex("maxAltitude");
const Iri payloadMass = ex("payloadMass");

KnowledgeBase with_types() {
  auto kb = models::load_seed();
  define_type_description(kb, {maxAltitude, "maximum altitude", "altitude above ground the robot can reach", "m",
                               Datatype::Decimal});
  define_type_description(kb, {payloadMass, "payload mass", "mass the robot can carry", "kg", Datatype::Decimal});
  kb.add_type(ex("Hexacopter2"), vocab::Robot);
  return kb;
}

InstanceDescription req(Expression e, const Iri& td = maxAltitude) { return {{}, td, {}, Role::Requirement, std::move(e)}; }
InstanceDescription assurance(Expression e, const Iri& td = maxAltitude) {
  return {{}, td, {}, Role::Assurance, std::move(e)};
}
InstanceDescription actual(Literal v, const Iri& td = maxAltitude) {
  return {{}, td, {}, Role::Actual, Expression::equals(std::move(v))};
}

Literal num(int v) { return Literal::integer(v); }

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return Errc::SyntaxError;
}

}  // namespace

TEST_CASE("type descriptions") {
  auto kb = with_types();
  const auto td = type_description(kb, maxAltitude);
  REQUIRE(td);
  CHECK(td->unit == "m");
  CHECK(td->datatype == Datatype::Decimal);
  CHECK(type_description(kb, payloadMass)->unit == "kg");
  CHECK(code_of([&] { define_type_description(kb, {maxAltitude, "again", "", "m", Datatype::Decimal}); }) ==
        Errc::DuplicateTypeDescription);
}

TEST_CASE("attach instance descriptions") {
  auto kb = with_types();
  const Iri hexa = ex("Hexacopter2");
  const auto a = attach(kb, hexa, maxAltitude, assurance(Expression::at_most(num(100))));
  const auto b = attach(kb, hexa, maxAltitude, actual(Literal(Datatype::Decimal, "12.5")));
  CHECK(a != b);
  const auto all = instance_descriptions_of(kb, hexa);
  REQUIRE(all.size() == 2);
  CHECK(data_elements_of(kb, hexa).size() == 1);
  CHECK(all[0].data_element == all[1].data_element);
  // integer operands widen to the decimal type
  CHECK(read_instance_description(kb, a).expression.value.datatype() == Datatype::Decimal);

  CHECK(code_of([&] { attach(kb, hexa, maxAltitude, req(Expression::equals(Literal::boolean(true)))); }) ==
        Errc::DatatypeMismatch);
  CHECK(code_of([&] { attach(kb, ex("Nobody"), maxAltitude, req(Expression::equals(num(1)))); }) == Errc::UnknownOwner);
  CHECK(code_of([&] { attach(kb, hexa, ex("noSuchType"), req(Expression::equals(num(1)))); }) ==
        Errc::UnknownTypeDescription);
  CHECK(code_of([&] { attach(kb, hexa, maxAltitude, req(Expression::interval(num(5), num(1)))); }) ==
        Errc::InvalidExpression);

  define_type_description(kb, {ex("color"), "colour", "", "", Datatype::String});
  CHECK(code_of([&] { attach(kb, hexa, ex("color"), req(Expression::at_most(Literal::string("red")), ex("color"))); }) ==
        Errc::InvalidExpression);
  CHECK_NOTHROW(attach(kb, hexa, ex("color"), req(Expression::equals(Literal::string("red")), ex("color"))));

  // one data element per (owner, type) survives a roundtrip
  const auto back = parse_turtle(serialize_turtle(kb));
  CHECK(data_elements_of(back, hexa).size() == 2);
  CHECK(instance_descriptions_of(back, hexa) == instance_descriptions_of(kb, hexa));
}

TEST_CASE("satisfaction examples") {
  CHECK_FALSE(satisfies(req(Expression::equals(num(150))), assurance(Expression::at_most(num(100)))));
  CHECK(satisfies(req(Expression::equals(num(100))), assurance(Expression::at_most(num(100)))));
  CHECK(satisfies(req(Expression::equals(Literal(Datatype::Decimal, "100.0"))), assurance(Expression::at_most(num(100)))));
  CHECK(satisfies(req(Expression::interval(num(10), num(80))), assurance(Expression::at_most(num(100)))));
  CHECK_FALSE(satisfies(req(Expression::at_least(num(10))), assurance(Expression::at_most(num(100)))));
  CHECK(satisfies(req(Expression::at_most(num(80))), actual(num(12))));
  CHECK_FALSE(satisfies(req(Expression::at_most(num(80))), actual(num(81))));

  CHECK(code_of([] { satisfies(assurance(Expression::equals(num(1))), assurance(Expression::equals(num(1)))); }) ==
        Errc::RoleMismatch);
  CHECK(code_of([] { satisfies(req(Expression::equals(num(1))), req(Expression::equals(num(1)))); }) ==
        Errc::RoleMismatch);
  CHECK(code_of([] { satisfies(req(Expression::equals(num(1))), assurance(Expression::equals(num(1)), payloadMass)); }) ==
        Errc::TypeDescriptionMismatch);
}

TEST_CASE("satisfaction agrees with grid enumeration") {
  std::mt19937 rng(42);
  for (int i = 0; i < 5000; ++i) {
    const auto r = random_expression(rng);
    const auto a = random_expression(rng);
    CHECK(satisfies(req(r), assurance(a)) == subset_on_grid(r, a));
    const int point = std::uniform_int_distribution<int>(-20, 20)(rng);
    CHECK(satisfies(req(r), actual(num(point))) == member(r, point));
  }
}

TEST_CASE("widening an offer never breaks satisfaction") {
  std::mt19937 rng(43);
  for (int i = 0; i < 2000; ++i) {
    const auto r = random_expression(rng);
    const auto a = random_expression(rng);
    const auto wider = random_expression(rng);
    if (!subset_on_grid(a, wider)) continue;
    if (satisfies(req(r), assurance(a))) CHECK(satisfies(req(r), assurance(wider)));
  }
  for (int v = -20; v <= 20; ++v) CHECK(satisfies(req(Expression::equals(num(v))), actual(num(v))));
}
