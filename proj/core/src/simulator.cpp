#include "aurcap/fleet/simulator.hpp"

#include <spdlog/spdlog.h>

#include <atomic>
#include <stdexcept>
#include <thread>

#include "aurcap/error.hpp"
#include "aurcap/models.hpp"
#include "aurcap/net/mqtt_client.hpp"
#include "aurcap/ontology/namespaces.hpp"
#include "aurcap/ontology/turtle.hpp"

namespace aurcap::fleet {

namespace {

using namespace std::chrono_literals;
using capability::IoKind;
using property::Expression;
using property::InstanceDescription;
using property::Role;
using structure::Modality;
using structure::Part;

Iri fl(const std::string& local) { return Iri(ns::fleet + local); }
Iri cap_type(const char* local) { return ns::term(ns::aur_cap, local); }

InstanceDescription assurance(const Iri& id, const Iri& td, Expression e) {
  return {id, td, std::nullopt, Role::Assurance, std::move(e)};
}

capability::CapabilityDescription cap(const std::string& id, const char* type, std::vector<capability::IoRole> in = {},
                                      std::vector<capability::IoRole> out = {}) {
  return {fl(id), cap_type(type), std::move(in), std::move(out), {}, {}};
}

SkillScript script(const std::string& capability, std::chrono::milliseconds duration, std::vector<Iri> params = {}) {
  return {fl(capability + "_skill"), fl(capability), duration, Outcome::Complete, 0ms, std::move(params)};
}

// Wall-clock run; held or suspended time still counts.
bool run_wall_clock(skill::ExecutionContext& ctx, std::chrono::milliseconds duration) {
  const auto end = std::chrono::steady_clock::now() + duration;
  while (std::chrono::steady_clock::now() < end) {
    if (!ctx.checkpoint()) return false;
    std::this_thread::sleep_for(std::min<std::chrono::nanoseconds>(2ms, end - std::chrono::steady_clock::now()));
  }
  return true;
}

skill::Behavior behavior_for(const SkillScript& s) {
  switch (s.outcome) {
    case Outcome::Complete:
      return [d = s.duration](skill::ExecutionContext& ctx) { run_wall_clock(ctx, d); };
    case Outcome::HonorSuspend:
      return [d = s.duration](skill::ExecutionContext& ctx) { ctx.sleep_for(d); };
    case Outcome::FailAt:
      break;
  }
  auto runs = std::make_shared<std::atomic<int>>(0);
  return [runs, d = s.duration, at = s.fail_at](skill::ExecutionContext& ctx) {
    if (runs->fetch_add(1) == 0) {
      if (!ctx.sleep_for(at)) return;
      throw std::runtime_error("scripted failure after " + std::to_string(at.count()) + " ms");
    }
    run_wall_clock(ctx, d);
  };
}

std::atomic<int> fleet_counter{0};

}  // namespace

std::string_view to_string(Outcome o) noexcept {
  switch (o) {
    case Outcome::Complete:
      return "complete";
    case Outcome::FailAt:
      return "fail-at";
    case Outcome::HonorSuspend:
      return "honor-suspend";
  }
  return "?";
}

std::optional<Outcome> outcome_from_string(std::string_view text) noexcept {
  for (auto o : {Outcome::Complete, Outcome::FailAt, Outcome::HonorSuspend})
    if (text == to_string(o)) return o;
  return std::nullopt;
}

FleetSpec default_fleet() {
  FleetSpec spec;
  const auto altitude = fl("altitude");
  const auto payload = fl("payloadMass");
  const auto target = fl("targetAltitude");
  spec.type_descriptions = {
      {altitude, "flight altitude", "Height above the take-off point at which the robot can operate.", "m",
       Datatype::Decimal},
      {payload, "payload mass", "Mass the robot can carry.", "kg", Datatype::Decimal},
      {target, "target altitude", "Altitude a flight skill climbs to.", "m", Datatype::Decimal},
  };
  const capability::IoRole item{IoKind::Product, "item"};

  SimulatedRobot rover;
  rover.description = {fl("Rover1"), vocab::Robot, Modality::Ground,
                       {{fl("Rover1_chassis"), vocab::Platform},
                        {fl("Rover1_wheels"), vocab::Actuator},
                        {fl("Rover1_gripper"), vocab::Actuator},
                        {fl("Rover1_camera"), vocab::Sensor}},
                       structure::Pose{{0, 0, 0}, {}, Iri(ns::aur_frame + "world")},
                       std::nullopt};
  rover.capabilities = {cap("Rover1_navigate", "Navigate"), cap("Rover1_grasp", "Grasp", {item}, {item}),
                        cap("Rover1_release", "Release", {item}, {item})};
  rover.properties = {{fl("Rover1"), assurance(fl("Rover1_payload"), payload, Expression::at_most(Literal::decimal(10.0)))}};
  rover.skills = {script("Rover1_navigate", 120ms), script("Rover1_grasp", 60ms), script("Rover1_release", 60ms)};

  SimulatedRobot quad;
  quad.description = {fl("Quadrocopter1"), vocab::Robot, Modality::Air,
                      {{fl("Quadrocopter1_rotor1"), vocab::Actuator},
                       {fl("Quadrocopter1_rotor2"), vocab::Actuator},
                       {fl("Quadrocopter1_rotor3"), vocab::Actuator},
                       {fl("Quadrocopter1_rotor4"), vocab::Actuator},
                       {fl("Quadrocopter1_camera1"), vocab::Sensor}},
                      structure::Pose{{5, 0, 0}, {}, Iri(ns::aur_frame + "world")},
                      std::nullopt};
  quad.capabilities = {cap("Quadrocopter1_fly", "Fly"), cap("Quadrocopter1_release", "Release", {item}, {item})};
  quad.properties = {{fl("Quadrocopter1_fly"), assurance(fl("Quadrocopter1_fly_altitude"), altitude,
                                                         Expression::at_most(Literal::decimal(120.0)))}};
  quad.skills = {script("Quadrocopter1_fly", 150ms, {target}), script("Quadrocopter1_release", 60ms)};

  SimulatedRobot hexa;
  hexa.description = {fl("Hexacopter2"), vocab::Robot, Modality::Air,
                      {{fl("Hexacopter2_frame"), vocab::Platform},
                       {fl("Hexacopter2_rotors"), vocab::Actuator},
                       {fl("Hexacopter2_camera"), vocab::Sensor}},
                      structure::Pose{{-5, 0, 0}, {}, Iri(ns::aur_frame + "world")},
                      std::nullopt};
  hexa.capabilities = {cap("Hexacopter2_fly", "Fly")};
  hexa.properties = {
      {fl("Hexacopter2_fly"),
       assurance(fl("Hexacopter2_fly_altitude"), altitude, Expression::at_most(Literal::decimal(100.0)))},
      {fl("Hexacopter2"), assurance(fl("Hexacopter2_payload"), payload, Expression::at_most(Literal::decimal(2.5)))}};
  hexa.skills = {script("Hexacopter2_fly", 150ms, {target})};

  spec.robots = {std::move(rover), std::move(quad), std::move(hexa)};

  auto transport = cap("transport", "Transport", {item}, {item});
  transport.sub_operators = {fl("Rover1_navigate"), fl("Rover1_grasp"), fl("Quadrocopter1_fly"),
                             fl("Quadrocopter1_release")};
  spec.composites = {std::move(transport)};
  return spec;
}

void describe_fleet(KnowledgeBase& kb, const FleetSpec& spec) {
  for (const auto& td : spec.type_descriptions)
    if (!property::type_description(kb, td.id)) property::define_type_description(kb, td);
  for (const auto& robot : spec.robots) {
    const bool known = structure::is_registered(kb, robot.description.id);
    if (!known) structure::register_robot(kb, robot.description);
    for (const auto& c : robot.capabilities) {
      if (!capability::is_capability(kb, c.id)) capability::define_capability(kb, c);
      capability::provides_capability(kb, robot.description.id, c.id);
    }
    if (known) continue;
    for (const auto& p : robot.properties) property::attach(kb, p.owner, p.instance.type_description, p.instance);
  }
  for (const auto& c : spec.composites)
    if (!capability::is_capability(kb, c.id)) capability::define_capability(kb, c);
}

std::string fleet_turtle(const FleetSpec& spec) {
  auto kb = models::load_seed();
  const auto seed = kb;
  describe_fleet(kb, spec);
  KnowledgeBase out;
  for (const auto& [name, iri] : kb.prefixes()) out.set_prefix(name, iri);
  out.set_prefix("fleet", ns::fleet);
  for (const auto& a : kb.axioms())
    if (!seed.contains(a)) out.add(a);
  for (const auto& a : kb.assertions())
    if (!seed.contains(a)) out.add(a);
  return "# generated by: aurcap describe-fleet\n" + serialize_turtle(out);
}

SimulatedFleet::SimulatedFleet(KnowledgeBase& kb, FleetSpec spec, FleetOptions options)
    : kb_(kb), spec_(std::move(spec)), runtime_(std::make_unique<skill::SkillRuntime>()) {
  describe_fleet(kb_, spec_);
  if (options.broker_uri.empty())
    broker_ = net::InProcessBroker::create("fleet-" + std::to_string(++fleet_counter));
  else
    broker_ = net::connect_broker(options.broker_uri, "aurcap-fleet-" + std::to_string(++fleet_counter));

  for (const auto& robot : spec_.robots)
    for (const auto& s : robot.skills)
      runtime_->register_skill(kb_, {s.skill, s.capability, robot.description.id, behavior_for(s), s.parameters});
  if (options.http) http_ = std::make_unique<interfaces::HttpSkillServer>(*runtime_, options.http_host, 0);
  for (const auto& skill : runtime_->skills()) {
    mqtt_.push_back(interfaces::bind_mqtt(*runtime_, kb_, skill, broker_));
    descriptors_.push_back(mqtt_.back()->descriptor());
    if (http_) descriptors_.push_back(http_->bind(kb_, skill));
  }
  for (auto& b : mqtt_) b->flush();
  spdlog::info("simulated fleet up: {} robots, {} skills, broker {}", spec_.robots.size(), runtime_->skills().size(),
               broker_->uri());
}

SimulatedFleet::~SimulatedFleet() { shutdown(); }

void SimulatedFleet::shutdown() {
  if (down_) return;
  down_ = true;
  std::vector<std::string> state_topics;
  for (const auto& b : mqtt_) state_topics.push_back(b->descriptor().state_topic);
  mqtt_.clear();
  if (http_) http_->stop();
  for (const auto& topic : state_topics) {
    try {
      broker_->publish({topic, {}, 1, true});
    } catch (const Error& e) {
      spdlog::warn("cannot clear {}: {}", topic, e.what());
    }
  }
  for (const auto& d : descriptors_) interfaces::remove_descriptor(kb_, d);
  runtime_.reset();
  http_.reset();
}

std::string SimulatedFleet::http_base_url() const { return http_ ? http_->base_url() : std::string{}; }

std::vector<Iri> SimulatedFleet::skills() const {
  std::vector<Iri> out;
  for (const auto& robot : spec_.robots)
    for (const auto& s : robot.skills) out.push_back(s.skill);
  return out;
}

std::vector<interfaces::Descriptor> SimulatedFleet::descriptors() const { return descriptors_; }

}  // namespace aurcap::fleet
