#include <doctest.h>

#include <random>

#include "aurcap/error.hpp"
#include "aurcap/models.hpp"
#include "aurcap/ontology/namespaces.hpp"
#include "aurcap/ontology/reasoner.hpp"
#include "aurcap/ontology/turtle.hpp"
#include "aurcap/structure.hpp"

using namespace aurcap;
using namespace aurcap::structure;

namespace {

const Iri world("https://w3id.org/aurcap/frame#world");
Iri ex(const std::string& local) { return Iri("https://example.org/s#" + local); }

RobotDescription quadrocopter() {
  RobotDescription d;
  d.id = ex("Quadrocopter1");
  d.robot_class = vocab::Robot;
  d.modality = Modality::Air;
  for (int i = 1; i <= 4; ++i) d.parts.push_back({ex("rotor" + std::to_string(i)), vocab::Actuator});
  d.parts.push_back({ex("camera1"), vocab::Sensor});
  return d;
}

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

TEST_CASE("register a quadrocopter with parts") {
  auto kb = models::load_seed();
  CHECK(register_robot(kb, quadrocopter()) == ex("Quadrocopter1"));
  CHECK(instances_of(kb, vocab::Robot).contains(ex("Quadrocopter1")));
  const auto devices = instances_of(kb, vocab::Device);
  for (const auto& p : quadrocopter().parts) CHECK(devices.contains(p.id));
  CHECK(parts_of(kb, ex("Quadrocopter1")).size() == 5);
  CHECK(modality_of(kb, ex("Quadrocopter1")) == Modality::Air);
  // Robot class without a platform part is not classified autonomous by the existential,
  // but the Air modality class sits below AutonomousRobot
  CHECK(is_instance_of(kb, ex("Quadrocopter1"), vocab::AutonomousRobot));
}

TEST_CASE("minimal robot") {
  auto kb = models::load_seed();
  RobotDescription d{ex("Bare"), vocab::Robot, Modality::Ground, {}, std::nullopt, std::nullopt};
  register_robot(kb, d);
  CHECK(is_registered(kb, ex("Bare")));
  CHECK_FALSE(pose_of(kb, ex("Bare")));
  CHECK(code_of([&] { register_robot(kb, d); }) == Errc::DuplicateId);
}

TEST_CASE("platform part classifies the robot through consistsOf") {
  auto kb = models::load_seed();
  parse_turtle_into(kb,
                    "@prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .\n"
                    "@prefix aur: <https://w3id.org/aurcap/core#> .\n"
                    "@prefix ex: <https://example.org/s#> .\n"
                    "ex:PlainRobot rdfs:subClassOf aur:Robot .\n");
  RobotDescription d{ex("Rover1"), ex("PlainRobot"), Modality::Ground, {{ex("chassis"), vocab::Platform}}, {}, {}};
  register_robot(kb, d);
  CHECK(instances_of(kb, vocab::AutonomousRobot).contains(ex("Rover1")));
  CHECK(kb.contains(ObjectLink{ex("Rover1"), vocab::consistsOf, ex("chassis")}));
  CHECK(kb.contains(ObjectLink{ex("Rover1"), vocab::robotPart, ex("chassis")}));
}

TEST_CASE("invalid robot descriptions") {
  auto kb = models::load_seed();
  auto d = quadrocopter();
  d.robot_class = vocab::Sensor;
  CHECK(code_of([&] { register_robot(kb, d); }) == Errc::UnknownClass);
  d = quadrocopter();
  d.parts.push_back({ex("wing"), vocab::Process});
  CHECK(code_of([&] { register_robot(kb, d); }) == Errc::UnknownClass);
  d = quadrocopter();
  d.pose = Pose{{0, 0, 0}, {0.5, 0, 0, 0}, world};
  CHECK(code_of([&] { register_robot(kb, d); }) == Errc::NonUnitQuaternion);
  d.pose = Pose{{0, 0, 0}, {1, 0, 0, 0}, ex("nowhere")};
  CHECK(code_of([&] { register_robot(kb, d); }) == Errc::UnknownFrame);
  CHECK_FALSE(is_registered(kb, d.id));
}

TEST_CASE("poses") {
  auto kb = models::load_seed();
  register_robot(kb, quadrocopter());
  const Iri q = ex("Quadrocopter1");
  const Pose identity{{0, 0, 0}, {1, 0, 0, 0}, world};
  set_pose(kb, q, identity);
  CHECK(pose_of(kb, q) == identity);

  const double h = std::sqrt(0.5);
  const Pose turned{{12.5, -3.25, 40}, {h, 0, 0, h}, world};
  set_pose(kb, q, turned);
  CHECK(pose_of(kb, q) == turned);
  CHECK(kb.objects(q, vocab::hasPosition).size() == 1);
  CHECK(kb.values(q.with_suffix("_position"), vocab::x).size() == 1);

  CHECK(code_of([&] { set_pose(kb, q, Pose{{0, 0, 0}, {0.5, 0, 0, 0}, world}); }) == Errc::NonUnitQuaternion);
  CHECK(code_of([&] { set_pose(kb, ex("Ghost"), identity); }) == Errc::UnknownRobot);
  CHECK(pose_of(kb, q) == turned);

  // quaternion tolerance edge
  CHECK_NOTHROW(set_pose(kb, q, Pose{{0, 0, 0}, {1 + 0.5e-9, 0, 0, 0}, world}));
  CHECK(code_of([&] { set_pose(kb, q, Pose{{0, 0, 0}, {1 + 1e-8, 0, 0, 0}, world}); }) == Errc::NonUnitQuaternion);
}

TEST_CASE("modality partition and persistence") {
  auto kb = models::load_seed();
  register_robot(kb, quadrocopter());
  RobotDescription hexa{ex("Hexacopter2"), vocab::Robot, Modality::Air, {}, Pose{{1, 2, 3}, {1, 0, 0, 0}, world}, {}};
  register_robot(kb, hexa);
  register_robot(kb, {ex("Rover1"), vocab::Robot, Modality::Ground, {{ex("chassis"), vocab::Platform}}, {}, {}});
  register_robot(kb, {ex("Boat"), vocab::Robot, Modality::Water, {}, {}, {}});

  CHECK(robots_by_modality(kb, Modality::Air) == std::set<Iri>{ex("Quadrocopter1"), ex("Hexacopter2")});
  std::size_t total = 0;
  for (auto m : {Modality::Air, Modality::Ground, Modality::Water}) {
    for (auto other : {Modality::Air, Modality::Ground, Modality::Water}) {
      if (m == other) continue;
      for (const auto& r : robots_by_modality(kb, m)) CHECK_FALSE(robots_by_modality(kb, other).contains(r));
    }
    total += robots_by_modality(kb, m).size();
  }
  CHECK(total == registered_robots(kb).size());

  const auto back = parse_turtle(serialize_turtle(kb));
  for (auto m : {Modality::Air, Modality::Ground, Modality::Water})
    CHECK(robots_by_modality(back, m) == robots_by_modality(kb, m));
  CHECK(pose_of(back, ex("Hexacopter2")) == pose_of(kb, ex("Hexacopter2")));
  CHECK(instances_of(back, vocab::Device) == instances_of(kb, vocab::Device));
  CHECK(instances_of(back, vocab::AutonomousRobot) == instances_of(kb, vocab::AutonomousRobot));

  CHECK(robots_by_modality(KnowledgeBase{}, Modality::Air).empty());
}

TEST_CASE("zones") {
  EnvironmentDescription env{ex("airfield"),
                             {{ex("nfz1"), ZoneKind::NoFly, {{0, 0, 0}, {10, 10, 100}}},
                              {ex("nfz2"), ZoneKind::NoFly, {{5, 5, 0}, {20, 20, 50}}},
                              {ex("ops"), ZoneKind::Operational, {{-100, -100, 0}, {100, 100, 150}}}}};
  const auto on_corner = Pose{{10, 10, 100}, {}, world};
  CHECK(pose_in_zone(on_corner, env, ZoneKind::NoFly) == std::set<Iri>{ex("nfz1")});
  CHECK(pose_in_zone(Pose{{500, 0, 0}, {}, world}, env, ZoneKind::NoFly).empty());
  CHECK(pose_in_zone(Pose{{500, 0, 0}, {}, world}, env, ZoneKind::Operational).empty());

  auto kb = models::load_seed();
  register_environment(kb, env);
  const auto stored = environment_of(kb, ex("airfield"));
  REQUIRE(stored.zones.size() == 3);

  std::mt19937 rng(7);
  std::uniform_real_distribution<double> coord(-30, 130);
  for (int i = 0; i < 2000; ++i) {
    const Pose p{{coord(rng), coord(rng), coord(rng)}, {}, world};
    for (auto kind : {ZoneKind::NoFly, ZoneKind::Operational}) {
      std::set<Iri> expected;
      for (const auto& z : env.zones) {
        const auto& b = z.box;
        const auto& v = p.position;
        const bool in = !(v.x < b.min.x) && !(v.x > b.max.x) && !(v.y < b.min.y) && !(v.y > b.max.y) &&
                        !(v.z < b.min.z) && !(v.z > b.max.z);
        if (z.kind == kind && in) expected.insert(z.id);
      }
      CHECK(pose_in_zone(p, stored, kind) == expected);
    }
  }

  EnvironmentDescription bad{ex("bad"), {{ex("z"), ZoneKind::NoFly, {{1, 0, 0}, {0, 1, 1}}}}};
  CHECK(code_of([&] { register_environment(kb, bad); }) == Errc::InvalidZone);

  RobotDescription d{ex("Scout"), vocab::Robot, Modality::Air, {}, {}, ex("airfield")};
  register_robot(kb, d);
  CHECK(kb.object(ex("Scout"), vocab::operatesIn) == ex("airfield"));
}
