#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aurcap/skill/runtime.hpp"

// JSON payloads exchanged over both bindings. Serialization is canonical:
// fixed field order, UTF-8, no insignificant whitespace.
namespace aurcap::wire {

struct WireParameter {
  std::string type_description;  // absolute IRI
  std::string value;             // lexical form
  std::string datatype;          // "string" | "integer" | "decimal" | "boolean" | "iri"
  friend bool operator==(const WireParameter&, const WireParameter&) = default;
};

struct CommandMessage {
  std::optional<std::string> correlation_id;
  skill::Command command = skill::Command::Start;
  std::vector<WireParameter> parameters;
  std::optional<std::string> issued_at;
  friend bool operator==(const CommandMessage&, const CommandMessage&) = default;
};

struct StateMessage {
  std::string skill;
  skill::SkillState state = skill::SkillState::Idle;
  std::optional<std::string> correlation_id;
  std::uint64_t sequence = 0;
  std::string at;
  friend bool operator==(const StateMessage&, const StateMessage&) = default;
};

struct Rejection {
  std::optional<std::string> correlation_id;
  std::string reason;
};

std::string to_json(const CommandMessage& m);
std::string to_json(const StateMessage& m);
std::string to_json(const Rejection& r);

// Throw InvalidMessage with the offending field in the detail.
CommandMessage parse_command(std::string_view json);
StateMessage parse_state(std::string_view json);
Rejection parse_rejection(std::string_view json);

StateMessage from_change(const skill::StateChange& change);
std::vector<skill::Parameter> to_parameters(const std::vector<WireParameter>& params);
std::vector<WireParameter> from_parameters(const std::vector<skill::Parameter>& params);

std::string rfc3339(skill::Clock::time_point t);
bool is_rfc3339(std::string_view text);
bool is_uuid(std::string_view text);
std::string new_uuid();

}  // namespace aurcap::wire
