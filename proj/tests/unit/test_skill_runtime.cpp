#include <doctest.h>

#include <atomic>
#include <map>
#include <random>
#include <set>

#include "aurcap/error.hpp"
#include "aurcap/ontology/reasoner.hpp"
#include "aurcap/skill/runtime.hpp"
#include "oracles.hpp"
#include "skill_fixture.hpp"

using namespace aurcap;
using namespace aurcap::skill;
using namespace aurcap::oracle;
using aurcap::test::sx;
using namespace std::chrono_literals;

namespace {

std::vector<std::string> names(const std::vector<SkillState>& states) {
  std::vector<std::string> out;
  for (auto s : states) out.emplace_back(to_string(s));
  return out;
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

TEST_CASE("state partition") {
  std::set<SkillState> waiting;
  for (auto s : kAllStates)
    if (is_waiting(s)) waiting.insert(s);
  CHECK(waiting == std::set<SkillState>{SkillState::Idle, SkillState::Completed, SkillState::Held, SkillState::Suspended,
                                        SkillState::Stopped, SkillState::Aborted});
  for (auto s : kAllStates) CHECK(state_from_string(to_string(s)) == s);
  for (auto c : kAllCommands) CHECK(command_from_string(to_string(c)) == c);
  CHECK_FALSE(command_from_string("Start"));
}

TEST_CASE("all 16 x 8 command edges match the transcribed table") {
  int accepted = 0;
  for (auto s : kAllStates)
    for (auto c : kAllCommands) {
      const auto it = command_edges().find({std::string(to_string(s)), std::string(to_string(c))});
      const auto target = command_target(s, c);
      CHECK(target.has_value() == (it != command_edges().end()));
      if (target && it != command_edges().end()) CHECK(to_string(*target) == it->second);
      accepted += target.has_value();
    }
  CHECK(accepted == static_cast<int>(command_edges().size()));
  for (auto s : kAllStates) {
    const auto it = automatic.find(std::string(to_string(s)));
    const auto next = automatic_successor(s);
    CHECK(next.has_value() == (it != automatic.end()));
    if (next && it != automatic.end()) CHECK(to_string(*next) == it->second);
  }
}

TEST_CASE("pure machine follows the oracle on random command sequences") {
  std::mt19937 rng(99);
  for (int round = 0; round < 500; ++round) {
    Isa88Machine m;
    std::string oracle = "Idle";
    for (int i = 0; i < 30; ++i) {
      const auto c = kAllCommands[rng() % kAllCommands.size()];
      const auto expected = oracle_apply(oracle, std::string(to_string(c)));
      const auto got = m.apply(c);
      REQUIRE(got.has_value() == expected.has_value());
      if (got) CHECK(names(*got) == *expected);
      CHECK(to_string(m.state()) == oracle);
    }
  }
}

TEST_CASE("registration") {
  auto kb = test::skill_kb();
  SkillRuntime rt;
  CHECK(rt.register_skill(kb, {sx("flySkill"), sx("fly"), sx("Quadrocopter1"), {}, {}}) == sx("flySkill"));
  CHECK(rt.current(sx("flySkill")).state == SkillState::Idle);
  CHECK(rt.current(sx("flySkill")).sequence == 0);
  CHECK(instances_of(kb, vocab::FunctionExecution).contains(sx("flySkill")));
  CHECK(instances_of(kb, vocab::Skill).contains(sx("flySkill")));
  CHECK(kb.contains(ObjectLink{sx("fly"), vocab::isRealizedBy, sx("flySkill")}));
  CHECK(code_of([&] { rt.register_skill(kb, {sx("detectSkill"), sx("detect"), sx("Quadrocopter1"), {}, {}}); }) ==
        Errc::CapabilityNotProvidedByHost);
  CHECK(code_of([&] { rt.register_skill(kb, {sx("x"), sx("warp"), sx("Quadrocopter1"), {}, {}}); }) ==
        Errc::UnknownCapability);
  CHECK(code_of([&] { rt.register_skill(kb, {sx("flySkill"), sx("fly"), sx("Quadrocopter1"), {}, {}}); }) ==
        Errc::DuplicateId);
  CHECK(code_of([&] { rt.command(sx("ghost"), Command::Start); }) == Errc::UnknownSkill);
}

TEST_CASE("start then body returns") {
  auto kb = test::skill_kb();
  SkillRuntime rt;
  rt.register_skill(kb, {sx("flySkill"), sx("fly"), sx("Quadrocopter1"), [](ExecutionContext&) {}, {}});
  auto stream = rt.observe(sx("flySkill"));
  const auto r = rt.command(sx("flySkill"), Command::Start, {}, "c-1");
  CHECK(r.accepted);
  CHECK(r.change.state == SkillState::Starting);
  REQUIRE(rt.wait_for(sx("flySkill"), {SkillState::Completed}, 2s));
  CHECK(names(test::drain(*stream)) == std::vector<std::string>{"Idle", "Starting", "Execute", "Completing", "Completed"});
}

TEST_CASE("no commands: only the initial state is observed") {
  auto kb = test::skill_kb();
  SkillRuntime rt;
  rt.register_skill(kb, {sx("flySkill"), sx("fly"), sx("Quadrocopter1"), {}, {}});
  auto stream = rt.observe(sx("flySkill"));
  CHECK(names(test::drain(*stream, 50ms)) == std::vector<std::string>{"Idle"});
}

TEST_CASE("rejections and abort during execute") {
  auto kb = test::skill_kb();
  SkillRuntime rt;
  rt.register_skill(kb, {sx("flySkill"), sx("fly"), sx("Quadrocopter1"), test::endless, {}});
  auto stream = rt.observe(sx("flySkill"));
  CHECK(rt.command(sx("flySkill"), Command::Start).accepted);
  const auto again = rt.command(sx("flySkill"), Command::Start);
  CHECK_FALSE(again.accepted);
  CHECK(again.reason == "not permissible in Execute");
  CHECK(again.change.state == SkillState::Execute);
  CHECK(rt.command(sx("flySkill"), Command::Abort).accepted);
  CHECK(rt.current(sx("flySkill")).state == SkillState::Aborted);
  const auto seen = names(test::drain(*stream));
  REQUIRE(seen.size() >= 2);
  CHECK(std::vector<std::string>(seen.end() - 2, seen.end()) == std::vector<std::string>{"Aborting", "Aborted"});
}

TEST_CASE("failing body aborts with detail") {
  auto kb = test::skill_kb();
  SkillRuntime rt;
  rt.register_skill(kb, {sx("flySkill"), sx("fly"), sx("Quadrocopter1"),
                         [](ExecutionContext&) { throw std::runtime_error("motor stalled"); }, {}});
  auto stream = rt.observe(sx("flySkill"));
  rt.command(sx("flySkill"), Command::Start, {}, "c-9");
  REQUIRE(rt.wait_for(sx("flySkill"), {SkillState::Aborted}, 2s));
  CHECK(rt.last_failure(sx("flySkill")) == "motor stalled");
  const auto last = rt.current(sx("flySkill"));
  CHECK(last.detail == "motor stalled");
  CHECK(last.correlation_id == "c-9");
  CHECK(names(test::drain(*stream)) ==
        std::vector<std::string>{"Idle", "Starting", "Execute", "Aborting", "Aborted"});
}

TEST_CASE("suspend and unsuspend a cooperative body") {
  auto kb = test::skill_kb();
  SkillRuntime rt;
  std::atomic<int> ticks = 0;
  rt.register_skill(kb, {sx("flySkill"), sx("fly"), sx("Quadrocopter1"),
                         [&](ExecutionContext& ctx) {
                           for (int i = 0; i < 20; ++i) {
                             if (!ctx.sleep_for(5ms)) return;
                             ++ticks;
                           }
                         },
                         {}});
  auto stream = rt.observe(sx("flySkill"));
  rt.command(sx("flySkill"), Command::Start);
  std::this_thread::sleep_for(20ms);
  REQUIRE(rt.command(sx("flySkill"), Command::Suspend).accepted);
  const int frozen = ticks.load();
  std::this_thread::sleep_for(60ms);
  CHECK(ticks.load() <= frozen + 1);
  CHECK(rt.current(sx("flySkill")).state == SkillState::Suspended);
  REQUIRE(rt.command(sx("flySkill"), Command::Unsuspend).accepted);
  REQUIRE(rt.wait_for(sx("flySkill"), {SkillState::Completed}, 3s));
  CHECK(ticks.load() == 20);
  CHECK(names(test::drain(*stream)) ==
        std::vector<std::string>{"Idle", "Starting", "Execute", "Suspending", "Suspended", "Unsuspending", "Execute",
                                 "Completing", "Completed"});
}

TEST_CASE("body finishing while held completes on unhold") {
  auto kb = test::skill_kb();
  SkillRuntime rt;
  std::atomic<bool> release = false;
  rt.register_skill(kb, {sx("flySkill"), sx("fly"), sx("Quadrocopter1"),
                         [&](ExecutionContext&) {
                           while (!release) std::this_thread::sleep_for(1ms);
                         },
                         {}});
  rt.command(sx("flySkill"), Command::Start);
  rt.command(sx("flySkill"), Command::Hold);
  release = true;
  std::this_thread::sleep_for(30ms);
  CHECK(rt.current(sx("flySkill")).state == SkillState::Held);
  const auto r = rt.command(sx("flySkill"), Command::Unhold, {}, "u-1");
  CHECK(r.change.state == SkillState::Unholding);
  CHECK(rt.current(sx("flySkill")).state == SkillState::Completed);
  CHECK(rt.current(sx("flySkill")).correlation_id == "u-1");
}

TEST_CASE("runtime trajectories match the oracle and quiesce in waiting states") {
  auto kb = test::skill_kb();
  SkillRuntime rt;
  rt.register_skill(kb, {sx("flySkill"), sx("fly"), sx("Quadrocopter1"), test::endless, {}});
  auto stream = rt.observe(sx("flySkill"));
  std::mt19937 rng(5);
  std::string oracle = "Idle";
  std::vector<std::string> expected{"Idle"};
  std::uint64_t last_seq = 0;
  for (int i = 0; i < 200; ++i) {
    const auto c = kAllCommands[rng() % kAllCommands.size()];
    const auto trail = oracle_apply(oracle, std::string(to_string(c)));
    const auto r = rt.command(sx("flySkill"), c);
    CHECK(r.accepted == trail.has_value());
    if (trail) expected.insert(expected.end(), trail->begin(), trail->end());
    const auto now = rt.current(sx("flySkill"));
    CHECK(std::string(to_string(now.state)) == oracle);
    CHECK(now.sequence >= last_seq);
    last_seq = now.sequence;
    // with an endless body every rest point is a waiting state or Execute
    CHECK((is_waiting(now.state) || now.state == SkillState::Execute));
  }
  CHECK(names(test::drain(*stream)) == expected);
  rt.command(sx("flySkill"), Command::Stop);
  CHECK(is_waiting(rt.current(sx("flySkill")).state));
}

TEST_CASE("correlation ids and sequence numbers") {
  auto kb = test::skill_kb();
  SkillRuntime rt;
  rt.register_skill(kb, {sx("flySkill"), sx("fly"), sx("Quadrocopter1"), test::endless, {}});
  auto stream = rt.observe(sx("flySkill"));
  const auto first = rt.command(sx("flySkill"), Command::Start, {}, "abc");
  const auto dup = rt.command(sx("flySkill"), Command::Start, {}, "abc");
  CHECK(dup.duplicate);
  CHECK(dup.accepted);
  CHECK(dup.change.sequence == first.change.sequence);
  rt.command(sx("flySkill"), Command::Stop, {}, "def");
  std::uint64_t prev = 0;
  bool first_entry = true;
  while (auto c = stream->next(50ms)) {
    if (!first_entry) CHECK(c->sequence == prev + 1);
    first_entry = false;
    prev = c->sequence;
    if (c->state == SkillState::Starting || c->state == SkillState::Execute) CHECK(c->correlation_id == "abc");
    if (c->state == SkillState::Stopping || c->state == SkillState::Stopped) CHECK(c->correlation_id == "def");
  }
  CHECK(prev == 4);
}

TEST_CASE("start parameters are checked against the skill's data elements") {
  auto kb = test::skill_kb();
  SkillRuntime rt;
  Literal seen;
  rt.register_skill(kb, {sx("flySkill"), sx("fly"), sx("Quadrocopter1"),
                         [&](ExecutionContext& ctx) { seen = *ctx.parameter(sx("targetAltitude")); },
                         {sx("targetAltitude")}});
  CHECK(property::data_element_of(kb, sx("flySkill"), sx("targetAltitude")));
  auto bad = rt.command(sx("flySkill"), Command::Start, {{sx("speed"), Literal::integer(3)}});
  CHECK_FALSE(bad.accepted);
  CHECK(bad.reason.find("unknown parameter") != std::string::npos);
  bad = rt.command(sx("flySkill"), Command::Start, {{sx("targetAltitude"), Literal::string("high")}});
  CHECK_FALSE(bad.accepted);
  CHECK(rt.current(sx("flySkill")).state == SkillState::Idle);
  CHECK(rt.command(sx("flySkill"), Command::Start, {{sx("targetAltitude"), Literal::integer(80)}}).accepted);
  REQUIRE(rt.wait_for(sx("flySkill"), {SkillState::Completed}, 2s));
  CHECK(seen == Literal(Datatype::Decimal, "80"));
}

TEST_CASE("bounded observer stream drops the oldest entries") {
  StateStream s(4);
  for (std::uint64_t i = 1; i <= 10; ++i) s.push(StateChange{sx("x"), SkillState::Idle, {}, i, {}, {}});
  CHECK(s.dropped() == 6);
  CHECK(s.try_next()->sequence == 7);
}

TEST_CASE("reset after completion allows another run") {
  auto kb = test::skill_kb();
  SkillRuntime rt;
  std::atomic<int> runs = 0;
  rt.register_skill(kb, {sx("flySkill"), sx("fly"), sx("Quadrocopter1"), [&](ExecutionContext&) { ++runs; }, {}});
  for (int i = 0; i < 5; ++i) {
    REQUIRE(rt.command(sx("flySkill"), Command::Start).accepted);
    REQUIRE(rt.wait_for(sx("flySkill"), {SkillState::Completed}, 2s));
    REQUIRE(rt.command(sx("flySkill"), Command::Reset).accepted);
    CHECK(rt.current(sx("flySkill")).state == SkillState::Idle);
  }
  CHECK(runs == 5);
}
