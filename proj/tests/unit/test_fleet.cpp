#include <doctest.h>
#include <httplib.h>
#include <json.hpp>

#include <set>
#include <sstream>
#include <thread>

#include "aurcap/error.hpp"
#include "aurcap/fleet/config.hpp"
#include "aurcap/fleet/registry.hpp"
#include "aurcap/fleet/simulator.hpp"
#include "aurcap/models.hpp"
#include "aurcap/net/broker.hpp"
#include "aurcap/net/wire.hpp"
#include "aurcap/ontology/reasoner.hpp"
#include "aurcap/ontology/turtle.hpp"
#include "aurcap/structure.hpp"
#include "match_oracle.hpp"
#include "test_support.hpp"

using namespace aurcap;
using namespace std::chrono_literals;
using json = nlohmann::json;

namespace {

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return Errc::SyntaxError;
}

Iri fl(const std::string& local) { return Iri(ns::fleet + local); }

std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

std::filesystem::path model_path(const std::string& name) {
  return std::filesystem::path(AURCAP_FIXTURE_DIR) / ".." / ".." / "models" / name;
}

// Robots of the spec offering a capability at or below `type`, worked out on
// the test's own copy of the taxonomy.
std::set<std::string> robots_offering(const fleet::FleetSpec& spec, const std::string& type) {
  std::set<std::string> out;
  for (const auto& r : spec.robots)
    for (const auto& c : r.capabilities)
      if (oracle::cap_below(std::string(c.capability_type.local_name()), type))
        out.insert(std::string(r.description.id.local_name()));
  return out;
}

std::set<std::string> robot_names(const std::string& body) {
  std::set<std::string> out;
  for (const auto& r : json::parse(body)) out.insert(std::string(Iri(r.at("robot").get<std::string>()).local_name()));
  return out;
}

// A registry on a free port over the seed vocabularies.
struct RegistryRig {
  fleet::Registry registry{models::load_seed()};
  std::unique_ptr<httplib::Client> client;
  std::unique_ptr<fleet::SimulatedFleet> sim;

  RegistryRig() {
    registry.listen("127.0.0.1", 0);
    client = std::make_unique<httplib::Client>(registry.base_url());
    client->set_read_timeout(10, 0);
  }
  ~RegistryRig() {
    if (sim) registry.write([&](KnowledgeBase&) { sim->shutdown(); });
    registry.stop();
  }
  void boot_fleet() {
    registry.write([&](KnowledgeBase& kb) { sim = std::make_unique<fleet::SimulatedFleet>(kb, fleet::default_fleet()); });
  }
  httplib::Result post(const std::string& path, const std::string& body) {
    return client->Post(path, body, "text/turtle");
  }
};

}  // namespace

TEST_CASE("shipped fleet.ttl is the generated fleet description") {
  CHECK(std::string(models::text("fleet.ttl")) == fleet::fleet_turtle(fleet::default_fleet()));
  auto kb = models::load_seed_with_fleet();
  const auto before = serialize_turtle(kb);
  fleet::describe_fleet(kb, fleet::default_fleet());
  CHECK(serialize_turtle(kb) == before);
}

TEST_CASE("default fleet boots as its manifest says") {
  const auto manifest = test::read_manifest("default-fleet.manifest");
  auto kb = models::load_seed();
  fleet::SimulatedFleet sim(kb, fleet::default_fleet());

  std::set<std::string> robots;
  for (const auto& r : instances_of(kb, vocab::Robot)) robots.insert(std::string(r.local_name()));
  const auto expected_robots = words(manifest.at("robots"));
  CHECK(robots == std::set<std::string>(expected_robots.begin(), expected_robots.end()));

  std::set<Iri> all_skills;
  for (const auto& name : expected_robots) {
    const auto robot = fl(name);
    CHECK(std::string(structure::to_string(*structure::modality_of(kb, robot))) ==
          manifest.at(name + ".modality"));
    std::set<std::string> hosted;
    for (const auto& s : kb.subjects(vocab::hostedOn, robot)) hosted.insert(std::string(s.local_name()));
    const auto expected = words(manifest.at(name + ".skills"));
    CHECK(hosted == std::set<std::string>(expected.begin(), expected.end()));
    for (const auto& s : expected) all_skills.insert(fl(s));
  }
  const auto listed = sim.skills();
  CHECK(std::set<Iri>(listed.begin(), listed.end()) == all_skills);

  for (const auto& entry : words(manifest.at("fly.max_altitude"))) {
    const auto colon = entry.find(':');
    const auto cap = fl(entry.substr(0, colon) + "_fly");
    bool found = false;
    for (const auto& inst : property::instance_descriptions_of(kb, cap)) {
      if (inst.type_description != fl("altitude")) continue;
      found = true;
      CHECK(inst.role == property::Role::Assurance);
      CHECK(inst.expression.kind == property::ExpressionKind::LessOrEqual);
      CHECK(inst.expression.value.as_double() == std::stod(entry.substr(colon + 1)));
    }
    CHECK_MESSAGE(found, entry);
  }

  // every scripted skill realizes a capability its own robot provides
  for (const auto& s : sim.skills()) {
    const auto caps = kb.subjects(vocab::isRealizedBy, s);
    REQUIRE(caps.size() == 1);
    const auto host = kb.object(s, vocab::hostedOn);
    REQUIRE(host);
    const auto provided = kb.objects(*host, vocab::providesCapability);
    CHECK(std::find(provided.begin(), provided.end(), caps.front()) != provided.end());
  }

  // retained state: one Idle message per skill, as a late subscriber sees it
  std::mutex m;
  std::map<std::string, wire::StateMessage> seen;
  const auto id = sim.broker()->subscribe("#", [&](const net::Message& msg) {
    if (msg.topic.find("/state") == std::string::npos) return;
    std::lock_guard lock(m);
    seen[msg.topic] = wire::parse_state(msg.payload);
  });
  for (int i = 0; i < 100; ++i) {
    {
      std::lock_guard lock(m);
      if (seen.size() >= all_skills.size()) break;
    }
    std::this_thread::sleep_for(10ms);
  }
  sim.broker()->unsubscribe(id);
  std::lock_guard lock(m);
  CHECK(seen.size() == all_skills.size());
  for (const auto& [topic, state] : seen) {
    CHECK_MESSAGE(state.state == skill::SkillState::Idle, topic);
    CHECK(all_skills.contains(Iri(state.skill)));
  }

  // and every skill is live over both bindings
  for (const auto& s : all_skills) {
    std::set<interfaces::InterfaceKind> kinds;
    for (const auto& d : interfaces::read_descriptors(kb, s)) kinds.insert(d.kind);
    CHECK(kinds == std::set{interfaces::InterfaceKind::Mqtt, interfaces::InterfaceKind::Http});
  }
}

TEST_CASE("a skill scripted for a capability of another robot is refused") {
  auto spec = fleet::default_fleet();
  spec.robots[0].skills[0].capability = spec.robots[1].capabilities[0].id;
  auto kb = models::load_seed();
  CHECK(code_of([&] { fleet::SimulatedFleet sim(kb, spec); }) == Errc::CapabilityNotProvidedByHost);
}

TEST_CASE("unreachable broker") {
  auto kb = models::load_seed();
  fleet::FleetOptions options;
  options.broker_uri = "mqtt://127.0.0.1:1";
  CHECK(code_of([&] { fleet::SimulatedFleet sim(kb, fleet::default_fleet(), options); }) == Errc::BrokerUnreachable);
  options.broker_uri = "inproc://nobody-made-this";
  CHECK(code_of([&] { fleet::SimulatedFleet sim(kb, fleet::default_fleet(), options); }) == Errc::BrokerUnreachable);
}

TEST_CASE("shutdown closes every interface") {
  auto kb = models::load_seed();
  auto sim = std::make_unique<fleet::SimulatedFleet>(kb, fleet::default_fleet());
  auto broker = std::dynamic_pointer_cast<net::InProcessBroker>(sim->broker());
  REQUIRE(broker);
  broker->drain();
  CHECK(broker->retained_count() == sim->skills().size());
  const auto url = sim->http_base_url();
  const auto skills = sim->skills();
  {
    httplib::Client c(url);
    CHECK(c.Get("/skills/Rover1_navigate_skill/state"));
  }

  sim->shutdown();
  broker->drain();
  CHECK(broker->retained_count() == 0);
  for (const auto& s : skills) CHECK(interfaces::read_descriptors(kb, s).empty());
  httplib::Client c(url);
  c.set_connection_timeout(1, 0);
  CHECK_FALSE(c.Get("/skills/Rover1_navigate_skill/state"));

  int delivered = 0;
  broker->subscribe("#", [&](const net::Message&) { ++delivered; });
  broker->publish({"aur/Rover1/Rover1_navigate_skill/cmd", R"({"command":"Start"})", 1, false});
  broker->drain();
  CHECK(delivered == 1);  // only the test's own subscription
  sim->shutdown();        // idempotent
}

TEST_CASE("fail-at script aborts the first run only") {
  auto spec = fleet::default_fleet();
  auto& script = spec.robots[0].skills[0];
  script.outcome = fleet::Outcome::FailAt;
  script.fail_at = 20ms;
  const auto id = script.skill;
  auto kb = models::load_seed();
  fleet::SimulatedFleet sim(kb, spec);
  auto& rt = sim.runtime();

  REQUIRE(rt.command(id, skill::Command::Start).accepted);
  CHECK(rt.wait_for(id, {skill::SkillState::Aborted}, 5s));
  CHECK(rt.last_failure(id).find("scripted failure") != std::string::npos);
  REQUIRE(rt.command(id, skill::Command::Reset).accepted);
  REQUIRE(rt.wait_for(id, {skill::SkillState::Idle}, 5s));
  REQUIRE(rt.command(id, skill::Command::Start).accepted);
  CHECK(rt.wait_for(id, {skill::SkillState::Completed}, 5s));
}

TEST_CASE("outcome names") {
  for (auto o : {fleet::Outcome::Complete, fleet::Outcome::FailAt, fleet::Outcome::HonorSuspend})
    CHECK(fleet::outcome_from_string(fleet::to_string(o)) == o);
  CHECK_FALSE(fleet::outcome_from_string("explode"));
}

TEST_CASE("config file") {
  const auto c = fleet::parse_config(
      "# registry\n"
      "listen = 0.0.0.0:9000\n"
      "broker=inproc://lab   # shared with the fleet\n"
      "model = a.ttl\n"
      "model = b.ttl\n"
      "\n"
      "log_level = debug\n"
      "fleet = true\n"
      "reusable = false\n"
      "step_timeout_ms = 1500\n");
  CHECK(c.listen == "0.0.0.0:9000");
  CHECK(c.broker_uri == "inproc://lab");
  CHECK(c.model_paths == std::vector<std::filesystem::path>{"a.ttl", "b.ttl"});
  CHECK(c.log_level == "debug");
  CHECK(c.embedded_fleet);
  CHECK_FALSE(c.reusable);
  CHECK(c.step_timeout_ms == 1500);

  CHECK(fleet::parse_config("broker = inproc://a#b\n").broker_uri == "inproc://a#b");

  const auto d = fleet::parse_config("");
  CHECK(d.listen == "127.0.0.1:8080");
  CHECK(d.model_paths.empty());

  for (const char* bad : {"colour = red\n", "listen\n", "fleet = maybe\n", "step_timeout_ms = soon\n",
                          "step_timeout_ms = -1\n", "log_level = loud\n"})
    CHECK_MESSAGE(code_of([&] { fleet::parse_config(bad); }) == Errc::InvalidConfig, bad);
  CHECK(code_of([] { fleet::load_config("/nonexistent/registry.conf"); }) == Errc::InvalidConfig);

  const auto a = fleet::parse_listen("127.0.0.1:8080");
  CHECK(a.host == "127.0.0.1");
  CHECK(a.port == 8080);
  for (const char* bad : {"8080", "host:", ":80", "h:99999", "h:x"})
    CHECK_MESSAGE(code_of([&] { fleet::parse_listen(bad); }) == Errc::InvalidConfig, bad);
}

TEST_CASE("boot is deterministic") {
  fleet::RegistryConfig config;
  config.model_paths = {model_path("fleet.ttl"), test::fixture("counting.ttl")};
  const auto a = fleet::boot_kb(config);
  const auto b = fleet::boot_kb(config);
  const auto ta = serialize_turtle(a);
  CHECK(ta == serialize_turtle(b));
  CHECK(std::hash<std::string>{}(ta) == std::hash<std::string>{}(serialize_turtle(b)));
  CHECK(instances_of(a, vocab::Robot) == instances_of(b, vocab::Robot));
  CHECK(instances_of(a, ns::term(ns::aur_cap, "Motion")) == instances_of(b, ns::term(ns::aur_cap, "Motion")));
  CHECK(instances_of(a, vocab::Robot).contains(fl("Hexacopter2")));

  config.model_paths.push_back("/nonexistent/model.ttl");
  CHECK_THROWS_AS(fleet::boot_kb(config), Error);
}

TEST_CASE("registry: models and robots") {
  RegistryRig rig;
  auto res = rig.post("/registry/models", std::string(models::text("fleet.ttl")));
  REQUIRE(res);
  CHECK(res->status == 201);
  CHECK(json::parse(res->body).at("assertions").get<int>() > 0);

  const auto spec = fleet::default_fleet();
  for (const char* type : {"Fly", "Motion", "Release", "Swim", "Transport", "vdi3682:ProcessOperator"}) {
    res = rig.client->Get(std::string("/registry/robots?capabilityType=") + type);
    REQUIRE(res);
    CHECK(res->status == 200);
    const std::string local(type);
    CHECK_MESSAGE(robot_names(res->body) == robots_offering(spec, local.substr(local.find(':') + 1)), type);
  }
  res = rig.client->Get("/registry/robots?capabilityType=Fly");
  CHECK(robot_names(res->body) == std::set<std::string>{"Hexacopter2", "Quadrocopter1"});
  res = rig.client->Get("/registry/robots?capabilityType=https%3A%2F%2Fw3id.org%2Faurcap%2Fcap%23Grasp");
  CHECK(robot_names(res->body) == std::set<std::string>{"Rover1"});

  // every robot the API lists is a Robot in the KB, and the other way round
  res = rig.client->Get("/registry/robots");
  std::set<Iri> listed;
  for (const auto& r : json::parse(res->body)) listed.insert(Iri(r.at("robot").get<std::string>()));
  rig.registry.read([&](const KnowledgeBase& kb) { CHECK(listed == instances_of(kb, vocab::Robot)); });

  res = rig.client->Get("/registry/robots?modality=Air");
  CHECK(robot_names(res->body) == std::set<std::string>{"Hexacopter2", "Quadrocopter1"});
  res = rig.client->Get("/registry/robots?modality=Ground&capabilityType=Motion");
  CHECK(robot_names(res->body) == std::set<std::string>{"Rover1"});
  res = rig.client->Get("/registry/robots?modality=Underground");
  CHECK(res->status == 400);
  res = rig.client->Get("/registry/robots?capabilityType=Teleport");
  CHECK(res->status == 400);

  res = rig.post("/registry/models", "@prefix ex: <https://example.org/x#> .\nex:a ex:b \n");
  REQUIRE(res);
  CHECK(res->status == 400);
  const auto err = json::parse(res->body);
  CHECK(err.at("error") == "SyntaxError");
  CHECK(err.at("line").get<int>() >= 2);
  CHECK(err.contains("column"));
}

TEST_CASE("registry: missions") {
  RegistryRig rig;
  auto res = rig.client->Get("/missions/m999");
  REQUIRE(res);
  CHECK(res->status == 404);
  res = rig.client->Post("/missions/m999/execute", "", "text/plain");
  CHECK(res->status == 404);

  rig.boot_fleet();
  res = rig.post("/missions", test::read_fixture("swim-mission.ttl"));
  REQUIRE(res);
  CHECK(res->status == 422);
  auto body = json::parse(res->body);
  CHECK(body.at("error") == "Unsatisfiable");
  CHECK(body.at("step").get<std::string>().find("swim") != std::string::npos);

  res = rig.post("/missions", test::read_fixture("transport-150m.ttl"));
  CHECK(res->status == 422);
  CHECK(json::parse(res->body).at("step").get<std::string>().find("fly") != std::string::npos);

  res = rig.post("/missions", "not turtle at all");
  CHECK(res->status == 400);

  res = rig.post("/missions", std::string(models::text("transport-mission.ttl")));
  REQUIRE(res);
  REQUIRE(res->status == 201);
  body = json::parse(res->body);
  const auto id = body.at("id").get<std::string>();
  CHECK(body.at("plan").at("assignments").size() == 4);

  res = rig.client->Get("/missions/" + id);
  CHECK(res->status == 200);
  res = rig.client->Post("/missions/" + id + "/execute", "", "text/plain");
  CHECK(res->status == 202);

  std::string status;
  const auto deadline = std::chrono::steady_clock::now() + 10s;
  while (std::chrono::steady_clock::now() < deadline) {
    res = rig.client->Get("/missions/" + id);
    REQUIRE(res);
    const auto m = json::parse(res->body);
    if (m.contains("report") && !m.at("report").is_null()) status = m.at("report").at("status").get<std::string>();
    if (status == "Succeeded" || status == "Failed" || status == "Aborted") break;
    std::this_thread::sleep_for(50ms);
  }
  CHECK(status == "Succeeded");
  const auto report = json::parse(res->body).at("report");
  REQUIRE(report.at("steps").size() == 4);
  for (const auto& s : report.at("steps")) CHECK(s.at("trajectory").back().at("state") == "Completed");

  res = rig.client->Post("/missions/" + id + "/execute", "", "text/plain");
  CHECK(res->status == 409);
}
