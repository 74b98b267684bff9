#include <doctest.h>
#include <httplib.h>

#include <atomic>
#include <random>
#include <set>

#include "aurcap/error.hpp"
#include "aurcap/interfaces/bindings.hpp"
#include "aurcap/interfaces/descriptor.hpp"
#include "aurcap/net/mqtt_client.hpp"
#include "aurcap/net/mqtt_codec.hpp"
#include "aurcap/ontology/reasoner.hpp"
#include "aurcap/ontology/turtle.hpp"
#include "skill_fixture.hpp"

using namespace aurcap;
using namespace aurcap::interfaces;
using aurcap::skill::Command;
using aurcap::skill::SkillState;
using aurcap::test::sx;
using namespace std::chrono_literals;

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

// Collects messages from one subscription.
struct Inbox {
  std::mutex mutex;
  std::condition_variable cv;
  std::vector<net::Message> messages;

  net::MessageHandler handler() {
    return [this](const net::Message& m) {
      {
        std::lock_guard lock(mutex);
        messages.push_back(m);
      }
      cv.notify_all();
    };
  }
  bool wait_count(std::size_t n, std::chrono::milliseconds timeout = 3s) {
    std::unique_lock lock(mutex);
    return cv.wait_for(lock, timeout, [&] { return messages.size() >= n; });
  }
  std::vector<net::Message> snapshot() {
    std::lock_guard lock(mutex);
    return messages;
  }
  std::vector<SkillState> states() {
    std::vector<SkillState> out;
    for (const auto& m : snapshot()) out.push_back(wire::parse_state(m.payload).state);
    return out;
  }
};

// One skill on Quadrocopter1, registered in a fresh runtime.
struct Rig {
  KnowledgeBase kb = test::skill_kb();
  skill::SkillRuntime runtime;
  Iri skill_id;

  explicit Rig(skill::Behavior behavior = test::endless, const std::string& local = "flySkill") : skill_id(sx(local)) {
    runtime.register_skill(kb, {skill_id, sx("fly"), sx("Quadrocopter1"), std::move(behavior), {sx("targetAltitude")}});
  }
};

std::string quiet_state_json(skill::SkillRuntime& rt, const Iri& s) {
  return wire::to_json(wire::from_change(rt.current(s)));
}

}  // namespace

TEST_CASE("mqtt remaining-length boundaries roundtrip") {
  for (std::size_t len : {0u, 1u, 127u, 128u, 16383u, 16384u, 2097151u, 2097152u}) {
    net::mqtt::Packet p{net::mqtt::PacketType::Publish, 0x01, std::string(len, 'x')};
    auto bytes = net::mqtt::encode(p);
    const std::size_t header = 1 + (len < 128 ? 1 : len < 16384 ? 2 : len < 2097152 ? 3 : 4);
    CHECK(bytes.size() == header + len);
    auto partial = bytes.substr(0, bytes.size() - 1);
    if (!partial.empty()) CHECK_FALSE(net::mqtt::decode(partial).has_value());
    const auto decoded = net::mqtt::decode(bytes);
    REQUIRE(decoded);
    CHECK(decoded->body.size() == len);
    CHECK(decoded->flags == 0x01);
    CHECK(bytes.empty());
  }
  std::string bad = "\x30\xff\xff\xff\xff\x01";
  CHECK(code_of([&] { net::mqtt::decode(bad); }) == Errc::InvalidMessage);
}

TEST_CASE("mqtt packet builders roundtrip") {
  std::mt19937 rng(5);
  for (int i = 0; i < 200; ++i) {
    net::mqtt::Publish pub{"a/b/" + std::to_string(rng()), std::string(rng() % 300, 'p'), static_cast<int>(rng() % 2),
                           rng() % 2 == 0, false, static_cast<std::uint16_t>(1 + rng() % 1000)};
    if (pub.qos == 0) pub.packet_id = 0;
    auto bytes = net::mqtt::encode(net::mqtt::make_publish(pub));
    const auto back = net::mqtt::parse_publish(*net::mqtt::decode(bytes));
    CHECK(back.topic == pub.topic);
    CHECK(back.payload == pub.payload);
    CHECK(back.qos == pub.qos);
    CHECK(back.retain == pub.retain);
    CHECK(back.packet_id == pub.packet_id);
  }
  const auto sub = net::mqtt::parse_subscribe(net::mqtt::make_subscribe({7, {{"x/+", 1}, {"y/#", 0}}}));
  CHECK(sub.packet_id == 7);
  CHECK(sub.filters == std::vector<std::pair<std::string, int>>{{"x/+", 1}, {"y/#", 0}});
  const auto c = net::mqtt::parse_connect(net::mqtt::make_connect({"me", 12, true}));
  CHECK(c.client_id == "me");
  CHECK(c.keep_alive == 12);
}

TEST_CASE("topic filters") {
  CHECK(net::topic_matches("a/+/c", "a/b/c"));
  CHECK_FALSE(net::topic_matches("a/+/c", "a/b/d"));
  CHECK(net::topic_matches("a/#", "a/b/c"));
  CHECK(net::topic_matches("a/#", "a"));
  CHECK_FALSE(net::topic_matches("a/b", "a/b/c"));
  CHECK(net::is_valid_filter("a/+/#"));
  CHECK_FALSE(net::is_valid_filter("a/#/b"));
  CHECK_FALSE(net::is_valid_filter("a/b+"));
  CHECK_FALSE(net::is_valid_topic("a/+"));
}

TEST_CASE("topic segment encoding") {
  std::mt19937 rng(17);
  const std::string alphabet = "aZ09._~-/+# %\xc3\xa9";
  for (int i = 0; i < 500; ++i) {
    std::string name;
    const auto n = 1 + rng() % 12;
    for (std::size_t k = 0; k < n; ++k) name.push_back(alphabet[rng() % alphabet.size()]);
    const auto seg = encode_segment(name);
    CHECK(seg.find_first_of("/+#") == std::string::npos);
    CHECK(decode_segment(seg) == name);
  }
  CHECK(code_of([] { encode_segment(""); }) == Errc::TopicEncodingError);
  CHECK(command_topic(sx("Quadrocopter1"), sx("fly,skill")) == "aur/robots/Quadrocopter1/skills/fly%2Cskill/cmd");
  CHECK(state_topic(sx("Quadrocopter1"), sx("flySkill")) == "aur/robots/Quadrocopter1/skills/flySkill/state");
  CHECK(rejected_topic(sx("Quadrocopter1"), sx("flySkill")) == "aur/robots/Quadrocopter1/skills/flySkill/cmd/rejected");
}

TEST_CASE("wire messages reserialize byte-identically") {
  std::mt19937 rng(23);
  for (int i = 0; i < 300; ++i) {
    wire::CommandMessage m;
    m.command = skill::kAllCommands[rng() % skill::kAllCommands.size()];
    if (rng() % 2) m.correlation_id = wire::new_uuid();
    if (rng() % 2) m.issued_at = wire::rfc3339(skill::Clock::now());
    for (std::size_t k = rng() % 3; k > 0; --k)
      m.parameters.push_back({sx("p" + std::to_string(k)).str(), std::to_string(rng() % 100) + ".5", "decimal"});
    const auto text = wire::to_json(m);
    CHECK(text.find(' ') == std::string::npos);
    const auto back = wire::parse_command(text);
    CHECK(back == m);
    CHECK(wire::to_json(back) == text);
  }
  // Whitespace and field order are not significant on input.
  const auto loose = wire::parse_command(
      "{ \"issuedAt\" : \"2024-05-01T10:00:00Z\",\n \"command\":\"hold\" ,"
      " \"correlationId\": \"123e4567-e89b-12d3-a456-426614174000\" }");
  CHECK(wire::to_json(loose) ==
        R"({"correlationId":"123e4567-e89b-12d3-a456-426614174000","command":"hold","issuedAt":"2024-05-01T10:00:00Z"})");

  wire::StateMessage s{sx("flySkill").str(), SkillState::Held, std::nullopt, 42, "2024-05-01T10:00:00.000Z"};
  const auto st = wire::to_json(s);
  CHECK(st == R"({"skill":"https://example.org/sk#flySkill","state":"Held","correlationId":null,"sequence":42,)"
              R"("at":"2024-05-01T10:00:00.000Z"})");
  CHECK(wire::parse_state(st) == s);
  CHECK(wire::to_json(wire::parse_state(st)) == st);
}

TEST_CASE("wire schema strictness") {
  for (const char* bad : {R"({})", R"({"command":"Start"})", R"({"command":"launch"})", R"({"command":"start","x":1})",
                          R"({"command":"start","correlationId":"abc"})", R"({"command":"start","issuedAt":"yesterday"})",
                          R"({"command":"start","parameters":[{"typeDescription":"t","value":"1","datatype":"decimal"}]})",
                          R"({"command":"start","parameters":[{"typeDescription":"https://x#t","value":"one","datatype":"decimal"}]})",
                          R"([1,2])", "not json"}) {
    CAPTURE(bad);
    CHECK(code_of([&] { wire::parse_command(bad); }) == Errc::InvalidMessage);
  }
}

TEST_CASE("mqtt binding drives the skill through the in-process broker") {
  Rig rig;
  auto broker = std::make_shared<net::InProcessBroker>();
  auto binding = bind_mqtt(rig.runtime, rig.kb, rig.skill_id, broker);
  const auto& d = binding->descriptor();
  CHECK(d.id == sx("flySkill_mqtt"));
  CHECK(d.command_topic == "aur/robots/Quadrocopter1/skills/flySkill/cmd");

  Inbox states, rejected;
  broker->subscribe(d.state_topic, states.handler());
  broker->subscribe(rejected_topic(d.command_topic), rejected.handler());
  REQUIRE(states.wait_count(1));  // retained Idle

  broker->publish({d.command_topic, R"({"command":"start"})", 1, false});
  REQUIRE(states.wait_count(3));
  CHECK(states.states() == std::vector<SkillState>{SkillState::Idle, SkillState::Starting, SkillState::Execute});

  SUBCASE("malformed payload goes to the rejected channel") {
    const auto before = rig.runtime.current(rig.skill_id).sequence;
    broker->publish({d.command_topic, R"({"correlationId":"123e4567-e89b-12d3-a456-426614174000"})", 1, false});
    REQUIRE(rejected.wait_count(1));
    const auto r = wire::parse_rejection(rejected.snapshot()[0].payload);
    CHECK(r.reason.find("command") != std::string::npos);
    CHECK(r.correlation_id == "123e4567-e89b-12d3-a456-426614174000");
    CHECK(rig.runtime.current(rig.skill_id).sequence == before);
  }
  SUBCASE("non-permissible command is rejected with the current state") {
    broker->publish({d.command_topic, R"({"command":"reset"})", 1, false});
    REQUIRE(rejected.wait_count(1));
    CHECK(wire::parse_rejection(rejected.snapshot()[0].payload).reason == "not permissible in Execute");
  }
  SUBCASE("redelivered command is applied once") {
    const std::string hold = R"({"correlationId":"00000000-0000-4000-8000-000000000001","command":"hold"})";
    broker->publish({d.command_topic, hold, 1, false});
    broker->publish({d.command_topic, hold, 1, false});
    broker->drain();
    binding->flush();
    broker->drain();
    CHECK(states.states() == std::vector<SkillState>{SkillState::Idle, SkillState::Starting, SkillState::Execute,
                                                     SkillState::Holding, SkillState::Held});
    CHECK(rejected.snapshot().empty());
  }
  SUBCASE("descriptor is a skill interface in the KB") {
    CHECK(instances_of(rig.kb, vocab::SkillInterface).contains(d.id));
    CHECK(instances_of(rig.kb, vocab::MQTTClient).contains(d.id));
  }
}

TEST_CASE("mqtt binding over a TCP broker") {
  Rig rig([](skill::ExecutionContext& ctx) { ctx.sleep_for(20ms); });
  net::MqttTcpBroker server;
  auto binding = bind_mqtt(rig.runtime, rig.kb, rig.skill_id, server.uri());
  CHECK(binding->descriptor().broker_uri == server.uri());

  auto observer = net::connect_broker(server.uri());
  Inbox states;
  observer->subscribe(binding->descriptor().state_topic, states.handler());
  REQUIRE(states.wait_count(1));
  CHECK(states.snapshot()[0].retained);

  auto inv = invoke_remote(binding->descriptor(), {std::nullopt, Command::Start, {}, std::nullopt});
  CHECK(inv->initial().state == SkillState::Starting);
  CHECK(inv->initial().correlation_id == inv->correlation_id());
  const auto done = inv->wait_for({SkillState::Completed}, 3s);
  CHECK(done.correlation_id == inv->correlation_id());
  REQUIRE(states.wait_count(5));
  CHECK(states.states() == std::vector<SkillState>{SkillState::Idle, SkillState::Starting, SkillState::Execute,
                                                   SkillState::Completing, SkillState::Completed});
  const auto msgs = states.snapshot();
  for (std::size_t i = 1; i < msgs.size(); ++i) CHECK_FALSE(msgs[i].retained);  // live deliveries
  CHECK(server.connection_count() >= 2);
}

TEST_CASE("broker unreachable") {
  Rig rig;
  std::uint16_t closed_port;
  {
    net::MqttTcpBroker probe;
    closed_port = probe.port();
  }
  CHECK(code_of([&] { bind_mqtt(rig.runtime, rig.kb, rig.skill_id, "mqtt://127.0.0.1:" + std::to_string(closed_port)); }) ==
        Errc::BrokerUnreachable);
  CHECK(code_of([&] { net::connect_broker("inproc://nobody-here"); }) == Errc::BrokerUnreachable);
  CHECK(code_of([&] { net::connect_broker("amqp://x"); }) == Errc::BrokerUnreachable);
}

TEST_CASE("http binding resources") {
  Rig rig;
  HttpSkillServer server(rig.runtime);
  const auto d = server.bind(rig.kb, rig.skill_id);
  CHECK(d.id == sx("flySkill_http"));
  CHECK(d.base_url == server.base_url());
  httplib::Client client(server.base_url());

  auto res = client.Post("/skills/flySkill/transitions/start", "", "application/json");
  REQUIRE(res);
  CHECK(res->status == 202);
  CHECK(wire::parse_state(res->body).state == SkillState::Starting);

  res = client.Post("/skills/flySkill/transitions/start", "", "application/json");
  REQUIRE(res);
  CHECK(res->status == 409);
  CHECK(wire::parse_rejection(res->body).reason.find("Execute") != std::string::npos);

  res = client.Get("/skills/flySkill/state");
  REQUIRE(res);
  CHECK(res->status == 200);
  CHECK(res->body == quiet_state_json(rig.runtime, rig.skill_id));

  CHECK(client.Post("/skills/flySkill/transitions/launch", "", "application/json")->status == 404);
  CHECK(client.Post("/skills/ghost/transitions/stop", "", "application/json")->status == 404);
  CHECK(client.Post("/skills/flySkill/transitions/hold", R"({"command":"stop"})", "application/json")->status == 400);
  CHECK(client.Post("/skills/flySkill/transitions/hold", "{", "application/json")->status == 400);
  CHECK(rig.runtime.current(rig.skill_id).state == SkillState::Execute);

  res = client.Post("/skills/flySkill/transitions/hold",
                    R"({"correlationId":"00000000-0000-4000-8000-0000000000aa","command":"hold"})", "application/json");
  REQUIRE(res);
  CHECK(res->status == 202);
  CHECK(wire::parse_state(res->body).correlation_id == "00000000-0000-4000-8000-0000000000aa");

  SUBCASE("description lists one resource per command plus state") {
    res = client.Get("/skills/flySkill/description");
    REQUIRE(res);
    CHECK(res->status == 200);
    const auto& doc = res->body;
    auto count = [&](const std::string& needle) {
      std::size_t n = 0;
      for (auto pos = doc.find(needle); pos != std::string::npos; pos = doc.find(needle, pos + 1)) ++n;
      return n;
    };
    CHECK(count("<resource ") == skill::kAllCommands.size() + 1);
    CHECK(count("path=\"transitions/") == skill::kAllCommands.size());
    CHECK(count("path=\"state\"") == 1);
    for (auto c : skill::kAllCommands)
      CHECK(doc.find("path=\"transitions/" + std::string(skill::to_string(c)) + "\"") != std::string::npos);
  }
}

TEST_CASE("http port already taken") {
  Rig rig;
  HttpSkillServer first(rig.runtime);
  CHECK(code_of([&] { HttpSkillServer second(rig.runtime, "127.0.0.1", first.port()); }) == Errc::PortUnavailable);
}

TEST_CASE("describe_interfaces") {
  Rig rig;
  CHECK(read_descriptors(rig.kb, rig.skill_id).empty());
  auto empty = parse_turtle(describe_interfaces(rig.kb, rig.skill_id));
  CHECK(empty.assertions().empty());

  auto broker = std::make_shared<net::InProcessBroker>();
  auto mqtt = bind_mqtt(rig.runtime, rig.kb, rig.skill_id, broker);
  HttpSkillServer server(rig.runtime);
  server.bind(rig.kb, rig.skill_id);
  write_descriptor(rig.kb, opcua_descriptor(rig.skill_id, "opc.tcp://127.0.0.1:4840"));

  const auto text = describe_interfaces(rig.kb, rig.skill_id);
  const auto fragment = parse_turtle(text);
  CHECK(fragment.objects(rig.skill_id, vocab::accessibleThrough).size() == 3);
  auto live = read_descriptors(rig.kb, rig.skill_id);
  auto restored = read_descriptors(fragment, rig.skill_id);
  CHECK(live.size() == 3);
  CHECK(restored == live);

  std::set<Iri> kinds;
  for (const auto& d : restored) kinds.insert(interface_class(d.kind));
  CHECK(kinds == std::set<Iri>{vocab::MQTTSkillInterface, vocab::HTTPSkillInterface, vocab::OPCUASkillInterface});
  const auto opc = std::find_if(live.begin(), live.end(), [](const auto& d) { return d.kind == InterfaceKind::OpcUa; });
  CHECK(code_of([&] { invoke_remote(*opc, {}); }) == Errc::InvalidMessage);
}

TEST_CASE("invoke_remote over both bindings") {
  Rig rig([](skill::ExecutionContext& ctx) { ctx.sleep_for(30ms); });
  auto broker = std::make_shared<net::InProcessBroker>();
  auto mqtt = bind_mqtt(rig.runtime, rig.kb, rig.skill_id, broker);
  HttpSkillServer server(rig.runtime);
  const auto http = server.bind(rig.kb, rig.skill_id);

  RemoteOptions via_broker;
  via_broker.broker = broker;
  auto inv = invoke_remote(mqtt->descriptor(), {std::nullopt, Command::Start, {}, std::nullopt}, via_broker);
  CHECK(inv->initial().state == SkillState::Starting);
  std::vector<SkillState> seen{inv->initial().state};
  while (auto s = inv->next(2s)) {
    seen.push_back(s->state);
    CHECK(s->correlation_id == inv->correlation_id());
    if (s->state == SkillState::Completed) break;
  }
  CHECK(seen == std::vector<SkillState>{SkillState::Starting, SkillState::Execute, SkillState::Completing,
                                        SkillState::Completed});

  CHECK(code_of([&] { invoke_remote(http, {std::nullopt, Command::Start, {}, std::nullopt}); }) == Errc::Rejected);
  try {
    invoke_remote(mqtt->descriptor(), {std::nullopt, Command::Hold, {}, std::nullopt}, via_broker);
    FAIL("expected Rejected");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::Rejected);
    CHECK(e.detail() == "not permissible in Completed");
  }

  auto reset = invoke_remote(http, {std::nullopt, Command::Reset, {}, std::nullopt});
  CHECK(reset->initial().state == SkillState::Resetting);
  CHECK(reset->wait_for({SkillState::Idle}, 2s).state == SkillState::Idle);

  wire::CommandMessage start{std::nullopt, Command::Start, {{sx("targetAltitude").str(), "80", "decimal"}}, std::nullopt};
  auto h = invoke_remote(http, start);
  CHECK(h->wait_for({SkillState::Completed}, 3s).state == SkillState::Completed);
}

TEST_CASE("invoke_remote on unreachable endpoints times out") {
  std::uint16_t closed_port;
  {
    net::MqttTcpBroker probe;
    closed_port = probe.port();
  }
  RemoteOptions quick;
  quick.deadline = 300ms;
  const auto http = http_descriptor(sx("flySkill"), "http://127.0.0.1:" + std::to_string(closed_port));
  CHECK(code_of([&] { invoke_remote(http, {}, quick); }) == Errc::Timeout);

  Descriptor mqtt;
  mqtt.id = sx("flySkill_mqtt");
  mqtt.skill = sx("flySkill");
  mqtt.broker_uri = "mqtt://127.0.0.1:" + std::to_string(closed_port);
  mqtt.command_topic = "aur/robots/Q/skills/flySkill/cmd";
  mqtt.state_topic = "aur/robots/Q/skills/flySkill/state";
  CHECK(code_of([&] { invoke_remote(mqtt, {}, quick); }) == Errc::Timeout);

  // Broker up, nobody serving the skill.
  auto lonely = std::make_shared<net::InProcessBroker>();
  quick.broker = lonely;
  CHECK(code_of([&] { invoke_remote(mqtt, {}, quick); }) == Errc::Timeout);
}

TEST_CASE("protocol equivalence on random command scripts") {
  std::mt19937 rng(41);
  for (int round = 0; round < 12; ++round) {
    Rig over_mqtt, over_http;
    auto broker = std::make_shared<net::InProcessBroker>();
    auto mqtt = bind_mqtt(over_mqtt.runtime, over_mqtt.kb, over_mqtt.skill_id, broker);
    HttpSkillServer server(over_http.runtime);
    const auto http = server.bind(over_http.kb, over_http.skill_id);
    auto a = over_mqtt.runtime.observe(over_mqtt.skill_id);
    auto b = over_http.runtime.observe(over_http.skill_id);

    RemoteOptions opts;
    opts.broker = broker;
    opts.deadline = 2s;
    std::vector<bool> accepted_a, accepted_b;
    for (int i = 0; i < 10; ++i) {
      const auto cmd = skill::kAllCommands[rng() % skill::kAllCommands.size()];
      for (auto [d, acc] : {std::pair{&mqtt->descriptor(), &accepted_a}, std::pair{&http, &accepted_b}}) {
        try {
          invoke_remote(*d, {std::nullopt, cmd, {}, std::nullopt}, opts);
          acc->push_back(true);
        } catch (const Error& e) {
          REQUIRE(e.code() == Errc::Rejected);
          acc->push_back(false);
        }
      }
    }
    CHECK(accepted_a == accepted_b);
    const auto ta = test::drain(*a, 50ms);
    const auto tb = test::drain(*b, 50ms);
    CHECK(ta == tb);
    CHECK(ta.size() > 1);
  }
}

TEST_CASE("retained state matches GET state") {
  Rig rig;
  auto broker = std::make_shared<net::InProcessBroker>();
  auto mqtt = bind_mqtt(rig.runtime, rig.kb, rig.skill_id, broker);
  HttpSkillServer server(rig.runtime);
  server.bind(rig.kb, rig.skill_id);
  httplib::Client client(server.base_url());
  std::mt19937 rng(7);
  for (int i = 0; i < 25; ++i) {
    const auto cmd = skill::kAllCommands[rng() % skill::kAllCommands.size()];
    client.Post("/skills/flySkill/transitions/" + std::string(skill::to_string(cmd)), "", "application/json");
    mqtt->flush();
    broker->drain();
    Inbox fresh;
    const auto id = broker->subscribe(mqtt->descriptor().state_topic, fresh.handler());
    REQUIRE(fresh.wait_count(1));
    const auto got = client.Get("/skills/flySkill/state");
    REQUIRE(got);
    const auto first = wire::parse_state(fresh.snapshot()[0].payload);
    CHECK(first == wire::parse_state(got->body));
    broker->unsubscribe(id);
  }
}

TEST_CASE("sequence increases across both bindings") {
  Rig rig;
  auto broker = std::make_shared<net::InProcessBroker>();
  auto mqtt = bind_mqtt(rig.runtime, rig.kb, rig.skill_id, broker);
  HttpSkillServer server(rig.runtime);
  const auto http = server.bind(rig.kb, rig.skill_id);
  Inbox states;
  broker->subscribe(mqtt->descriptor().state_topic, states.handler());
  RemoteOptions opts;
  opts.broker = broker;
  std::mt19937 rng(3);
  for (int i = 0; i < 40; ++i) {
    const auto cmd = skill::kAllCommands[rng() % skill::kAllCommands.size()];
    try {
      invoke_remote(i % 2 ? http : mqtt->descriptor(), {std::nullopt, cmd, {}, std::nullopt}, opts);
    } catch (const Error& e) {
      REQUIRE(e.code() == Errc::Rejected);
    }
  }
  mqtt->flush();
  broker->drain();
  const auto msgs = states.snapshot();
  REQUIRE(msgs.size() > 2);
  std::uint64_t last = 0;
  bool first = true;
  for (const auto& m : msgs) {
    const auto seq = wire::parse_state(m.payload).sequence;
    if (!first) CHECK(seq > last);
    first = false;
    last = seq;
  }
  CHECK(last == rig.runtime.current(rig.skill_id).sequence);
}
