#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace aurcap {

enum class Errc {
  SyntaxError,
  UnsupportedConstruct,
  InvalidIri,
  InvalidLiteral,
  InvalidAxiom,
  UnknownTerm,
  DuplicateId,
  UnknownClass,
  UnknownRobot,
  NonUnitQuaternion,
  UnknownFrame,
  InvalidZone,
  UnknownCapabilityType,
  UnknownCapability,
  CyclicDecomposition,
  SignatureMismatch,
  NotATechnicalResource,
  DuplicateTypeDescription,
  UnknownOwner,
  UnknownTypeDescription,
  DatatypeMismatch,
  InvalidExpression,
  RoleMismatch,
  TypeDescriptionMismatch,
  UnknownSkill,
  CapabilityNotProvidedByHost,
  InvalidParameter,
  BrokerUnreachable,
  TopicEncodingError,
  PortUnavailable,
  InvalidMessage,
  Timeout,
  Rejected,
  CyclicMission,
  InvalidMission,
  InterfaceTimeout,
  SkillBusy,
  InvalidConfig,
};

std::string_view to_string(Errc code) noexcept;

// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& detail);

  Errc code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  Errc code_;
  std::string detail_;
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t line, std::size_t column, const std::string& message);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string message_;
};

class UnsupportedConstruct : public Error {
 public:
  UnsupportedConstruct(std::string construct, std::size_t line = 0, std::size_t column = 0);

  const std::string& construct() const noexcept { return construct_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::string construct_;
  std::size_t line_;
  std::size_t column_;
};

}  // namespace aurcap
