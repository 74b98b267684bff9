#pragma once

#include <string>

#include "aurcap/ontology/iri.hpp"

// Namespaces and well-known terms of the capability and skill model.
namespace aurcap::ns {

inline const std::string rdf = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline const std::string rdfs = "http://www.w3.org/2000/01/rdf-schema#";
inline const std::string owl = "http://www.w3.org/2002/07/owl#";
inline const std::string xsd = "http://www.w3.org/2001/XMLSchema#";

inline const std::string aur = "https://w3id.org/aurcap/core#";
inline const std::string vdi3682 = "https://w3id.org/aurcap/vdi3682#";
inline const std::string iec61360 = "https://w3id.org/aurcap/iec61360#";
inline const std::string sumo = "https://w3id.org/aurcap/stub/sumo#";
inline const std::string dul = "https://w3id.org/aurcap/stub/dul#";
inline const std::string aur_cap = "https://w3id.org/aurcap/cap#";
inline const std::string aur_frame = "https://w3id.org/aurcap/frame#";
inline const std::string aur_mission = "https://w3id.org/aurcap/mission#";
inline const std::string fleet = "https://w3id.org/aurcap/fleet#";

inline Iri term(const std::string& ns, const char* local) { return Iri(ns + local); }

}  // namespace aurcap::ns

namespace aurcap::vocab {

// structure
inline const Iri Device = ns::term(ns::aur, "Device");
inline const Iri MechatronicSystem = ns::term(ns::aur, "MechatronicSystem");
inline const Iri Robot = ns::term(ns::aur, "Robot");
inline const Iri AutonomousRobot = ns::term(ns::aur, "AutonomousRobot");
inline const Iri AirRobot = ns::term(ns::aur, "AirRobot");
inline const Iri GroundRobot = ns::term(ns::aur, "GroundRobot");
inline const Iri WaterRobot = ns::term(ns::aur, "WaterRobot");
inline const Iri Platform = ns::term(ns::aur, "Platform");
inline const Iri Sensor = ns::term(ns::aur, "Sensor");
inline const Iri Actuator = ns::term(ns::aur, "Actuator");
inline const Iri Position = ns::term(ns::aur, "Position");
inline const Iri Orientation = ns::term(ns::aur, "Orientation");
inline const Iri ReferenceFrame = ns::term(ns::aur, "ReferenceFrame");
inline const Iri Environment = ns::term(ns::aur, "Environment");
inline const Iri Zone = ns::term(ns::aur, "Zone");
inline const Iri NoFlyZone = ns::term(ns::aur, "NoFlyZone");
inline const Iri OperationalZone = ns::term(ns::aur, "OperationalZone");
inline const Iri robotPart = ns::term(ns::aur, "robotPart");
inline const Iri consistsOf = ns::term(ns::aur, "consistsOf");
inline const Iri hasPosition = ns::term(ns::aur, "hasPosition");
inline const Iri hasOrientation = ns::term(ns::aur, "hasOrientation");
inline const Iri inFrame = ns::term(ns::aur, "inFrame");
inline const Iri operatesIn = ns::term(ns::aur, "operatesIn");
inline const Iri hasZone = ns::term(ns::aur, "hasZone");
inline const Iri x = ns::term(ns::aur, "x");
inline const Iri y = ns::term(ns::aur, "y");
inline const Iri z = ns::term(ns::aur, "z");
inline const Iri qw = ns::term(ns::aur, "qw");
inline const Iri qx = ns::term(ns::aur, "qx");
inline const Iri qy = ns::term(ns::aur, "qy");
inline const Iri qz = ns::term(ns::aur, "qz");
inline const Iri minX = ns::term(ns::aur, "minX");
inline const Iri minY = ns::term(ns::aur, "minY");
inline const Iri minZ = ns::term(ns::aur, "minZ");
inline const Iri maxX = ns::term(ns::aur, "maxX");
inline const Iri maxY = ns::term(ns::aur, "maxY");
inline const Iri maxZ = ns::term(ns::aur, "maxZ");

// capability
inline const Iri Process = ns::term(ns::vdi3682, "Process");
inline const Iri ProcessOperator = ns::term(ns::vdi3682, "ProcessOperator");
inline const Iri TechnicalResource = ns::term(ns::vdi3682, "TechnicalResource");
inline const Iri Product = ns::term(ns::vdi3682, "Product");
inline const Iri Information = ns::term(ns::vdi3682, "Information");
inline const Iri Energy = ns::term(ns::vdi3682, "Energy");
inline const Iri hasInput = ns::term(ns::vdi3682, "hasInput");
inline const Iri hasOutput = ns::term(ns::vdi3682, "hasOutput");
inline const Iri Capability = ns::term(ns::aur, "Capability");
inline const Iri Function = ns::term(ns::aur, "Function");
inline const Iri DecompositionSlot = ns::term(ns::aur, "DecompositionSlot");
inline const Iri providesCapability = ns::term(ns::aur, "providesCapability");
inline const Iri hasSubOperatorSlot = ns::term(ns::aur, "hasSubOperatorSlot");
inline const Iri slotOperator = ns::term(ns::aur, "slotOperator");
inline const Iri ordinal = ns::term(ns::aur, "ordinal");
inline const Iri stateLabel = ns::term(ns::aur, "stateLabel");
inline const Iri SumoProcess = ns::term(ns::sumo, "Process");

// property
inline const Iri TypeDescription = ns::term(ns::iec61360, "TypeDescription");
inline const Iri DataElement = ns::term(ns::iec61360, "DataElement");
inline const Iri InstanceDescription = ns::term(ns::iec61360, "InstanceDescription");
inline const Iri preferredName = ns::term(ns::iec61360, "preferredName");
inline const Iri definition = ns::term(ns::iec61360, "definition");
inline const Iri unitOfMeasure = ns::term(ns::iec61360, "unitOfMeasure");
inline const Iri valueDatatype = ns::term(ns::iec61360, "valueDatatype");
inline const Iri hasDataElement = ns::term(ns::iec61360, "hasDataElement");
inline const Iri hasTypeDescription = ns::term(ns::iec61360, "hasTypeDescription");
inline const Iri hasInstanceDescription = ns::term(ns::iec61360, "hasInstanceDescription");
inline const Iri forTypeDescription = ns::term(ns::iec61360, "forTypeDescription");
inline const Iri role = ns::term(ns::iec61360, "role");
inline const Iri expression = ns::term(ns::iec61360, "expression");
inline const Iri value = ns::term(ns::iec61360, "value");
inline const Iri lowerBound = ns::term(ns::iec61360, "lowerBound");
inline const Iri upperBound = ns::term(ns::iec61360, "upperBound");

// skill
inline const Iri Skill = ns::term(ns::aur, "Skill");
inline const Iri FunctionExecution = ns::term(ns::aur, "FunctionExecution");
inline const Iri SkillInterface = ns::term(ns::aur, "SkillInterface");
inline const Iri MQTTSkillInterface = ns::term(ns::aur, "MQTTSkillInterface");
inline const Iri MQTTClient = ns::term(ns::aur, "MQTTClient");
inline const Iri HTTPSkillInterface = ns::term(ns::aur, "HTTPSkillInterface");
inline const Iri OPCUASkillInterface = ns::term(ns::aur, "OPCUASkillInterface");
inline const Iri isRealizedBy = ns::term(ns::aur, "isRealizedBy");
inline const Iri accessibleThrough = ns::term(ns::aur, "accessibleThrough");
inline const Iri hostedOn = ns::term(ns::aur, "hostedOn");
inline const Iri brokerUri = ns::term(ns::aur, "brokerUri");
inline const Iri commandTopic = ns::term(ns::aur, "commandTopic");
inline const Iri stateTopic = ns::term(ns::aur, "stateTopic");
inline const Iri qos = ns::term(ns::aur, "qos");
inline const Iri baseUrl = ns::term(ns::aur, "baseUrl");
inline const Iri endpointUrl = ns::term(ns::aur, "endpointUrl");

// mission
inline const Iri Mission = ns::term(ns::aur_mission, "Mission");
inline const Iri Step = ns::term(ns::aur_mission, "Step");
inline const Iri RequiredCapability = ns::term(ns::aur_mission, "RequiredCapability");
inline const Iri StartParameter = ns::term(ns::aur_mission, "StartParameter");
inline const Iri hasStep = ns::term(ns::aur_mission, "hasStep");
inline const Iri stepOrdinal = ns::term(ns::aur_mission, "ordinal");
inline const Iri dependsOn = ns::term(ns::aur_mission, "dependsOn");
inline const Iri requiresCapability = ns::term(ns::aur_mission, "requires");
inline const Iri capabilityType = ns::term(ns::aur_mission, "capabilityType");
inline const Iri requiredInput = ns::term(ns::aur_mission, "requiredInput");
inline const Iri requiredOutput = ns::term(ns::aur_mission, "requiredOutput");
inline const Iri hasRequirement = ns::term(ns::aur_mission, "hasRequirement");
inline const Iri hasParameter = ns::term(ns::aur_mission, "hasParameter");
inline const Iri parameterType = ns::term(ns::aur_mission, "parameterType");
inline const Iri parameterValue = ns::term(ns::aur_mission, "parameterValue");

}  // namespace aurcap::vocab
