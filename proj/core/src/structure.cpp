#include "aurcap/structure.hpp"

#include <algorithm>
#include <cmath>

#include "aurcap/error.hpp"
#include "aurcap/ontology/namespaces.hpp"
#include "aurcap/ontology/reasoner.hpp"

namespace aurcap::structure {

namespace {

constexpr Modality kModalities[] = {Modality::Air, Modality::Ground, Modality::Water};

bool class_below(const KnowledgeBase& kb, const Iri& cls, const Iri& super) {
  return kb.is_class(cls) && kb.is_class(super) && is_subclass_of(kb, cls, super);
}

double number(const KnowledgeBase& kb, const Iri& subject, const Iri& property) {
  auto v = kb.value(subject, property);
  if (!v || !v->is_numeric())
    throw Error(Errc::InvalidLiteral, subject.str() + " lacks numeric " + std::string(property.local_name()));
  return v->as_double();
}

void check_pose(const KnowledgeBase& kb, const Pose& pose) {
  if (std::abs(pose.orientation.norm() - 1.0) > kQuaternionTolerance)
    throw Error(Errc::NonUnitQuaternion, "norm " + std::to_string(pose.orientation.norm()));
  if (pose.frame.empty() || !kb.is_individual(pose.frame))
    throw Error(Errc::UnknownFrame, pose.frame.empty() ? "<none>" : pose.frame.str());
}

void clear_pose(KnowledgeBase& kb, const Iri& robot) {
  for (const auto& position : kb.objects(robot, vocab::hasPosition))
    for (const auto& p : {vocab::x, vocab::y, vocab::z, vocab::inFrame}) kb.remove_links(position, p);
  for (const auto& orientation : kb.objects(robot, vocab::hasOrientation))
    for (const auto& p : {vocab::qw, vocab::qx, vocab::qy, vocab::qz}) kb.remove_links(orientation, p);
  kb.remove_links(robot, vocab::hasPosition);
  kb.remove_links(robot, vocab::hasOrientation);
}

std::vector<InstanceAssertion> pose_assertions(const Iri& robot, const Pose& pose) {
  const Iri position = robot.with_suffix("_position");
  const Iri orientation = robot.with_suffix("_orientation");
  const auto& q = pose.orientation;
  return {
      ObjectLink{robot, vocab::hasPosition, position},
      ClassAssertion{position, vocab::Position},
      DataLink{position, vocab::x, Literal::decimal(pose.position.x)},
      DataLink{position, vocab::y, Literal::decimal(pose.position.y)},
      DataLink{position, vocab::z, Literal::decimal(pose.position.z)},
      ObjectLink{position, vocab::inFrame, pose.frame},
      ObjectLink{robot, vocab::hasOrientation, orientation},
      ClassAssertion{orientation, vocab::Orientation},
      DataLink{orientation, vocab::qw, Literal::decimal(q.w)},
      DataLink{orientation, vocab::qx, Literal::decimal(q.x)},
      DataLink{orientation, vocab::qy, Literal::decimal(q.y)},
      DataLink{orientation, vocab::qz, Literal::decimal(q.z)},
  };
}

}  // namespace

std::string_view to_string(Modality m) noexcept {
  switch (m) {
    case Modality::Air: return "Air";
    case Modality::Ground: return "Ground";
    case Modality::Water: return "Water";
  }
  return "Ground";
}

std::optional<Modality> modality_from_string(std::string_view text) noexcept {
  for (auto m : kModalities)
    if (text == to_string(m)) return m;
  return std::nullopt;
}

const Iri& modality_class(Modality m) noexcept {
  switch (m) {
    case Modality::Air: return vocab::AirRobot;
    case Modality::Ground: return vocab::GroundRobot;
    case Modality::Water: return vocab::WaterRobot;
  }
  return vocab::GroundRobot;
}

double Quaternion::norm() const noexcept { return std::sqrt(w * w + x * x + y * y + z * z); }

bool Box::contains(const Vec3& p) const noexcept {
  return min.x <= p.x && p.x <= max.x && min.y <= p.y && p.y <= max.y && min.z <= p.z && p.z <= max.z;
}

bool is_registered(const KnowledgeBase& kb, const Iri& robot) {
  return kb.is_individual(robot) && kb.is_class(vocab::Robot) && is_instance_of(kb, robot, vocab::Robot);
}

Iri register_robot(KnowledgeBase& kb, const RobotDescription& desc) {
  if (desc.id.empty()) throw Error(Errc::InvalidIri, "robot without id");
  if (is_registered(kb, desc.id)) throw Error(Errc::DuplicateId, desc.id.str());
  if (!class_below(kb, desc.robot_class, vocab::Robot))
    throw Error(Errc::UnknownClass, desc.robot_class.str() + " is not a subclass of Robot");
  for (const auto& part : desc.parts) {
    if (part.id.empty()) throw Error(Errc::InvalidIri, "part without id");
    if (!class_below(kb, part.part_class, vocab::Device))
      throw Error(Errc::UnknownClass, part.part_class.str() + " is not a subclass of Device");
  }
  if (desc.pose) check_pose(kb, *desc.pose);
  if (desc.environment && !(kb.is_individual(*desc.environment) && is_instance_of(kb, *desc.environment, vocab::Environment)))
    throw Error(Errc::UnknownTerm, desc.environment->str() + " is not an Environment");

  // validate everything before the first write so a failure leaves kb unchanged
  kb.add_type(desc.id, desc.robot_class);
  kb.add_type(desc.id, modality_class(desc.modality));
  for (const auto& part : desc.parts) {
    kb.add_type(part.id, part.part_class);
    kb.add_link(desc.id, vocab::robotPart, part.id);
    if (is_subclass_of(kb, part.part_class, vocab::Platform)) kb.add_link(desc.id, vocab::consistsOf, part.id);
  }
  if (desc.pose)
    for (const auto& a : pose_assertions(desc.id, *desc.pose)) kb.add(a);
  if (desc.environment) kb.add_link(desc.id, vocab::operatesIn, *desc.environment);
  return desc.id;
}

std::vector<InstanceAssertion> set_pose(KnowledgeBase& kb, const Iri& robot, const Pose& pose) {
  if (!is_registered(kb, robot)) throw Error(Errc::UnknownRobot, robot.str());
  check_pose(kb, pose);
  clear_pose(kb, robot);
  auto assertions = pose_assertions(robot, pose);
  for (const auto& a : assertions) kb.add(a);
  return assertions;
}

std::optional<Pose> pose_of(const KnowledgeBase& kb, const Iri& robot) {
  const auto position = kb.object(robot, vocab::hasPosition);
  const auto orientation = kb.object(robot, vocab::hasOrientation);
  if (!position || !orientation) return std::nullopt;
  Pose pose;
  pose.position = {number(kb, *position, vocab::x), number(kb, *position, vocab::y), number(kb, *position, vocab::z)};
  pose.orientation = {number(kb, *orientation, vocab::qw), number(kb, *orientation, vocab::qx),
                      number(kb, *orientation, vocab::qy), number(kb, *orientation, vocab::qz)};
  if (auto frame = kb.object(*position, vocab::inFrame)) pose.frame = *frame;
  return pose;
}

std::set<Iri> registered_robots(const KnowledgeBase& kb) {
  if (!kb.is_class(vocab::Robot)) return {};
  return instances_of(kb, vocab::Robot);
}

std::set<Iri> robots_by_modality(const KnowledgeBase& kb, Modality m) {
  const Iri& cls = modality_class(m);
  if (!kb.is_class(cls)) return {};
  return instances_of(kb, cls);
}

std::optional<Modality> modality_of(const KnowledgeBase& kb, const Iri& robot) {
  if (!kb.is_individual(robot)) return std::nullopt;
  for (auto m : kModalities) {
    const Iri& cls = modality_class(m);
    if (kb.is_class(cls) && is_instance_of(kb, robot, cls)) return m;
  }
  return std::nullopt;
}

std::vector<Part> parts_of(const KnowledgeBase& kb, const Iri& robot) {
  std::vector<Part> parts;
  for (const auto& id : kb.objects(robot, vocab::robotPart)) {
    Part part{id, {}};
    for (const auto& t : kb.asserted_types(id))
      if (class_below(kb, t, vocab::Device)) {
        part.part_class = t;
        break;
      }
    parts.push_back(std::move(part));
  }
  return parts;
}

Iri register_environment(KnowledgeBase& kb, const EnvironmentDescription& env) {
  if (env.id.empty()) throw Error(Errc::InvalidIri, "environment without id");
  for (const auto& z : env.zones) {
    if (z.id.empty()) throw Error(Errc::InvalidIri, "zone without id");
    const auto& b = z.box;
    if (b.min.x > b.max.x || b.min.y > b.max.y || b.min.z > b.max.z)
      throw Error(Errc::InvalidZone, z.id.str() + " has min greater than max");
  }
  kb.add_type(env.id, vocab::Environment);
  for (const auto& z : env.zones) {
    kb.add_link(env.id, vocab::hasZone, z.id);
    kb.add_type(z.id, z.kind == ZoneKind::NoFly ? vocab::NoFlyZone : vocab::OperationalZone);
    kb.add_value(z.id, vocab::minX, Literal::decimal(z.box.min.x));
    kb.add_value(z.id, vocab::minY, Literal::decimal(z.box.min.y));
    kb.add_value(z.id, vocab::minZ, Literal::decimal(z.box.min.z));
    kb.add_value(z.id, vocab::maxX, Literal::decimal(z.box.max.x));
    kb.add_value(z.id, vocab::maxY, Literal::decimal(z.box.max.y));
    kb.add_value(z.id, vocab::maxZ, Literal::decimal(z.box.max.z));
  }
  return env.id;
}

EnvironmentDescription environment_of(const KnowledgeBase& kb, const Iri& env) {
  if (!kb.is_individual(env)) throw Error(Errc::UnknownTerm, env.str());
  EnvironmentDescription out{env, {}};
  for (const auto& id : kb.objects(env, vocab::hasZone)) {
    Zone z;
    z.id = id;
    const auto types = kb.asserted_types(id);
    z.kind = std::find(types.begin(), types.end(), vocab::NoFlyZone) != types.end() ? ZoneKind::NoFly
                                                                                     : ZoneKind::Operational;
    z.box.min = {number(kb, id, vocab::minX), number(kb, id, vocab::minY), number(kb, id, vocab::minZ)};
    z.box.max = {number(kb, id, vocab::maxX), number(kb, id, vocab::maxY), number(kb, id, vocab::maxZ)};
    out.zones.push_back(std::move(z));
  }
  return out;
}

std::set<Iri> pose_in_zone(const Pose& pose, const EnvironmentDescription& env, ZoneKind kind) {
  std::set<Iri> out;
  for (const auto& z : env.zones)
    if (z.kind == kind && z.box.contains(pose.position)) out.insert(z.id);
  return out;
}

}  // namespace aurcap::structure
