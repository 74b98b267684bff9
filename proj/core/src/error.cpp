#include "aurcap/error.hpp"

namespace aurcap {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::SyntaxError: return "SyntaxError";
    case Errc::UnsupportedConstruct: return "UnsupportedConstruct";
    case Errc::InvalidIri: return "InvalidIri";
    case Errc::InvalidLiteral: return "InvalidLiteral";
    case Errc::InvalidAxiom: return "InvalidAxiom";
    case Errc::UnknownTerm: return "UnknownTerm";
    case Errc::DuplicateId: return "DuplicateId";
    case Errc::UnknownClass: return "UnknownClass";
    case Errc::UnknownRobot: return "UnknownRobot";
    case Errc::NonUnitQuaternion: return "NonUnitQuaternion";
    case Errc::UnknownFrame: return "UnknownFrame";
    case Errc::InvalidZone: return "InvalidZone";
    case Errc::UnknownCapabilityType: return "UnknownCapabilityType";
    case Errc::UnknownCapability: return "UnknownCapability";
    case Errc::CyclicDecomposition: return "CyclicDecomposition";
    case Errc::SignatureMismatch: return "SignatureMismatch";
    case Errc::NotATechnicalResource: return "NotATechnicalResource";
    case Errc::DuplicateTypeDescription: return "DuplicateTypeDescription";
    case Errc::UnknownOwner: return "UnknownOwner";
    case Errc::UnknownTypeDescription: return "UnknownTypeDescription";
    case Errc::DatatypeMismatch: return "DatatypeMismatch";
    case Errc::InvalidExpression: return "InvalidExpression";
    case Errc::RoleMismatch: return "RoleMismatch";
    case Errc::TypeDescriptionMismatch: return "TypeDescriptionMismatch";
    case Errc::UnknownSkill: return "UnknownSkill";
    case Errc::CapabilityNotProvidedByHost: return "CapabilityNotProvidedByHost";
    case Errc::InvalidParameter: return "InvalidParameter";
    case Errc::BrokerUnreachable: return "BrokerUnreachable";
    case Errc::TopicEncodingError: return "TopicEncodingError";
    case Errc::PortUnavailable: return "PortUnavailable";
    case Errc::InvalidMessage: return "InvalidMessage";
    case Errc::Timeout: return "Timeout";
    case Errc::Rejected: return "Rejected";
    case Errc::CyclicMission: return "CyclicMission";
    case Errc::InvalidMission: return "InvalidMission";
    case Errc::InterfaceTimeout: return "InterfaceTimeout";
    case Errc::SkillBusy: return "SkillBusy";
    case Errc::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code), detail_(detail) {}

SyntaxError::SyntaxError(std::size_t line, std::size_t column, const std::string& message)
    : Error(Errc::SyntaxError,
            "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
      line_(line),
      column_(column),
      message_(message) {}

UnsupportedConstruct::UnsupportedConstruct(std::string construct, std::size_t line, std::size_t column)
    : Error(Errc::UnsupportedConstruct,
            line == 0 ? construct
                      : construct + " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")"),
      construct_(std::move(construct)),
      line_(line),
      column_(column) {}

}  // namespace aurcap
