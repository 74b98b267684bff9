#pragma once

#include <optional>
#include <set>
#include <string_view>
#include <vector>

#include "aurcap/ontology/knowledge_base.hpp"

namespace aurcap::structure {

enum class Modality { Air, Ground, Water };

std::string_view to_string(Modality m) noexcept;
std::optional<Modality> modality_from_string(std::string_view text) noexcept;
const Iri& modality_class(Modality m) noexcept;

struct Vec3 {
  double x = 0, y = 0, z = 0;
  friend bool operator==(const Vec3&, const Vec3&) = default;
};

struct Quaternion {
  double w = 1, x = 0, y = 0, z = 0;
  double norm() const noexcept;
  friend bool operator==(const Quaternion&, const Quaternion&) = default;
};

inline constexpr double kQuaternionTolerance = 1e-9;

struct Pose {
  Vec3 position;
  Quaternion orientation;
  Iri frame;
  friend bool operator==(const Pose&, const Pose&) = default;
};

struct Part {
  Iri id;
  Iri part_class;
  friend auto operator<=>(const Part&, const Part&) = default;
};

struct RobotDescription {
  Iri id;
  Iri robot_class;
  Modality modality = Modality::Ground;
  std::vector<Part> parts;
  std::optional<Pose> pose;
  std::optional<Iri> environment;
};

enum class ZoneKind { NoFly, Operational };

struct Box {
  Vec3 min, max;
  bool contains(const Vec3& p) const noexcept;  // inclusive
};

struct Zone {
  Iri id;
  ZoneKind kind = ZoneKind::Operational;
  Box box;
};

struct EnvironmentDescription {
  Iri id;
  std::vector<Zone> zones;
};

// Throws DuplicateId, UnknownClass, NonUnitQuaternion, UnknownFrame, UnknownTerm.
Iri register_robot(KnowledgeBase& kb, const RobotDescription& desc);

// Replaces the robot's pose. Returns the assertions now describing it.
std::vector<InstanceAssertion> set_pose(KnowledgeBase& kb, const Iri& robot, const Pose& pose);
std::optional<Pose> pose_of(const KnowledgeBase& kb, const Iri& robot);

bool is_registered(const KnowledgeBase& kb, const Iri& robot);
std::set<Iri> registered_robots(const KnowledgeBase& kb);
std::set<Iri> robots_by_modality(const KnowledgeBase& kb, Modality m);
std::optional<Modality> modality_of(const KnowledgeBase& kb, const Iri& robot);
std::vector<Part> parts_of(const KnowledgeBase& kb, const Iri& robot);

// Throws InvalidZone when a box has min > max on some axis.
Iri register_environment(KnowledgeBase& kb, const EnvironmentDescription& env);
EnvironmentDescription environment_of(const KnowledgeBase& kb, const Iri& env);

std::set<Iri> pose_in_zone(const Pose& pose, const EnvironmentDescription& env, ZoneKind kind);

}  // namespace aurcap::structure
