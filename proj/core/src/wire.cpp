#include "aurcap/net/wire.hpp"

#include <ctime>
#include <mutex>
#include <regex>

#include <boost/uuid/random_generator.hpp>
#include <boost/uuid/uuid_io.hpp>
#include <json.hpp>

#include "aurcap/error.hpp"

namespace aurcap::wire {

using json = nlohmann::ordered_json;

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(Errc::InvalidMessage, what); }

json parse_object(std::string_view text) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    invalid(std::string("not JSON: ") + e.what());
  }
  if (!j.is_object()) invalid("payload must be a JSON object");
  return j;
}

void only_fields(const json& j, std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : j.items())
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) invalid("unknown field '" + key + "'");
}

std::string string_field(const json& j, const char* name) {
  auto it = j.find(name);
  if (it == j.end()) invalid(std::string("missing field '") + name + "'");
  if (!it->is_string()) invalid(std::string("field '") + name + "' must be a string");
  return it->get<std::string>();
}

std::optional<std::string> nullable_string(const json& j, const char* name, bool required) {
  auto it = j.find(name);
  if (it == j.end()) {
    if (required) invalid(std::string("missing field '") + name + "'");
    return std::nullopt;
  }
  if (it->is_null()) return std::nullopt;
  if (!it->is_string()) invalid(std::string("field '") + name + "' must be a string or null");
  return it->get<std::string>();
}

json nullable(const std::optional<std::string>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

bool is_uuid(std::string_view text) {
  static const std::regex pattern("^[0-9a-fA-F]{8}-[0-9a-fA-F]{4}-[0-9a-fA-F]{4}-[0-9a-fA-F]{4}-[0-9a-fA-F]{12}$");
  return std::regex_match(text.begin(), text.end(), pattern);
}

bool is_rfc3339(std::string_view text) {
  static const std::regex pattern(
      R"(^\d{4}-(0[1-9]|1[0-2])-(0[1-9]|[12]\d|3[01])[Tt]([01]\d|2[0-3]):[0-5]\d:([0-5]\d|60)(\.\d+)?([Zz]|[+-]([01]\d|2[0-3]):[0-5]\d)$)");
  return std::regex_match(text.begin(), text.end(), pattern);
}

std::string rfc3339(skill::Clock::time_point t) {
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(t.time_since_epoch()).count();
  const std::time_t secs = static_cast<std::time_t>(ms / 1000);
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
  char out[40];
  std::snprintf(out, sizeof out, "%s.%03dZ", buf, static_cast<int>(ms % 1000));
  return out;
}

std::string new_uuid() {
  static std::mutex m;
  static boost::uuids::random_generator gen;
  std::lock_guard lock(m);
  return boost::uuids::to_string(gen());
}

std::string to_json(const CommandMessage& m) {
  json j;
  if (m.correlation_id) j["correlationId"] = *m.correlation_id;
  j["command"] = std::string(to_string(m.command));
  if (!m.parameters.empty()) {
    json params = json::array();
    for (const auto& p : m.parameters)
      params.push_back(json{{"typeDescription", p.type_description}, {"value", p.value}, {"datatype", p.datatype}});
    j["parameters"] = std::move(params);
  }
  if (m.issued_at) j["issuedAt"] = *m.issued_at;
  return j.dump();
}

std::string to_json(const StateMessage& m) {
  json j;
  j["skill"] = m.skill;
  j["state"] = std::string(to_string(m.state));
  j["correlationId"] = nullable(m.correlation_id);
  j["sequence"] = m.sequence;
  j["at"] = m.at;
  return j.dump();
}

std::string to_json(const Rejection& r) {
  json j;
  j["correlationId"] = nullable(r.correlation_id);
  j["reason"] = r.reason;
  return j.dump();
}

CommandMessage parse_command(std::string_view text) {
  const json j = parse_object(text);
  only_fields(j, {"correlationId", "command", "parameters", "issuedAt"});
  CommandMessage m;
  const auto name = string_field(j, "command");
  const auto cmd = skill::command_from_string(name);
  if (!cmd) invalid("unknown command '" + name + "'");
  m.command = *cmd;
  m.correlation_id = nullable_string(j, "correlationId", false);
  if (m.correlation_id && !is_uuid(*m.correlation_id)) invalid("correlationId must be a UUID");
  m.issued_at = nullable_string(j, "issuedAt", false);
  if (m.issued_at && !is_rfc3339(*m.issued_at)) invalid("issuedAt must be an RFC 3339 timestamp");
  if (auto it = j.find("parameters"); it != j.end()) {
    if (!it->is_array()) invalid("parameters must be an array");
    for (const auto& p : *it) {
      if (!p.is_object()) invalid("parameter entries must be objects");
      only_fields(p, {"typeDescription", "value", "datatype"});
      WireParameter wp{string_field(p, "typeDescription"), string_field(p, "value"), string_field(p, "datatype")};
      const auto dt = datatype_from_string(wp.datatype);
      if (!dt) invalid("unknown datatype '" + wp.datatype + "'");
      if (!Iri::is_valid(wp.type_description)) invalid("typeDescription must be an absolute IRI");
      if (!Literal::is_valid_lexical(*dt, wp.value)) invalid("value '" + wp.value + "' is not a valid " + wp.datatype);
      m.parameters.push_back(std::move(wp));
    }
  }
  return m;
}

StateMessage parse_state(std::string_view text) {
  const json j = parse_object(text);
  only_fields(j, {"skill", "state", "correlationId", "sequence", "at"});
  StateMessage m;
  m.skill = string_field(j, "skill");
  const auto name = string_field(j, "state");
  const auto state = skill::state_from_string(name);
  if (!state) invalid("unknown state '" + name + "'");
  m.state = *state;
  m.correlation_id = nullable_string(j, "correlationId", true);
  auto seq = j.find("sequence");
  if (seq == j.end() || !seq->is_number_unsigned()) invalid("sequence must be a non-negative integer");
  m.sequence = seq->get<std::uint64_t>();
  m.at = string_field(j, "at");
  if (!is_rfc3339(m.at)) invalid("at must be an RFC 3339 timestamp");
  return m;
}

Rejection parse_rejection(std::string_view text) {
  const json j = parse_object(text);
  only_fields(j, {"correlationId", "reason"});
  return {nullable_string(j, "correlationId", true), string_field(j, "reason")};
}

StateMessage from_change(const skill::StateChange& change) {
  return {change.skill.str(), change.state, change.correlation_id, change.sequence, rfc3339(change.at)};
}

std::vector<skill::Parameter> to_parameters(const std::vector<WireParameter>& params) {
  std::vector<skill::Parameter> out;
  for (const auto& p : params) {
    const auto dt = datatype_from_string(p.datatype);
    if (!dt || !Literal::is_valid_lexical(*dt, p.value)) invalid("bad parameter value '" + p.value + "'");
    out.push_back({Iri(p.type_description), Literal(*dt, p.value)});
  }
  return out;
}

std::vector<WireParameter> from_parameters(const std::vector<skill::Parameter>& params) {
  std::vector<WireParameter> out;
  for (const auto& p : params)
    out.push_back({p.type_description.str(), p.value.lexical(), std::string(to_string(p.value.datatype()))});
  return out;
}

}  // namespace aurcap::wire
