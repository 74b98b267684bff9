#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

// MQTT 3.1.1 control packets, the subset needed by the client and the test
// broker: no will messages, no authentication, QoS 0 and 1.
namespace aurcap::net::mqtt {

enum class PacketType : std::uint8_t {
  Connect = 1,
  Connack = 2,
  Publish = 3,
  Puback = 4,
  Subscribe = 8,
  Suback = 9,
  Unsubscribe = 10,
  Unsuback = 11,
  Pingreq = 12,
  Pingresp = 13,
  Disconnect = 14,
};

struct Packet {
  PacketType type = PacketType::Pingreq;
  std::uint8_t flags = 0;  // low nibble of the fixed header
  std::string body;        // variable header + payload
};

std::string encode(const Packet& p);
// Removes one complete packet from the front of `buffer`. Returns nullopt if
// more bytes are needed; throws InvalidMessage on malformed input.
std::optional<Packet> decode(std::string& buffer);

struct Connect {
  std::string client_id;
  std::uint16_t keep_alive = 30;
  bool clean_session = true;
};

struct Publish {
  std::string topic;
  std::string payload;
  int qos = 0;
  bool retain = false;
  bool dup = false;
  std::uint16_t packet_id = 0;  // QoS > 0 only
};

struct Subscribe {
  std::uint16_t packet_id = 0;
  std::vector<std::pair<std::string, int>> filters;
};

struct Unsubscribe {
  std::uint16_t packet_id = 0;
  std::vector<std::string> filters;
};

Packet make_connect(const Connect& c);
Connect parse_connect(const Packet& p);
Packet make_connack(std::uint8_t return_code);
std::uint8_t parse_connack(const Packet& p);
Packet make_publish(const Publish& m);
Publish parse_publish(const Packet& p);
Packet make_puback(std::uint16_t packet_id);
Packet make_subscribe(const Subscribe& s);
Subscribe parse_subscribe(const Packet& p);
Packet make_suback(std::uint16_t packet_id, const std::vector<std::uint8_t>& codes);
Packet make_unsubscribe(const Unsubscribe& u);
Unsubscribe parse_unsubscribe(const Packet& p);
Packet make_unsuback(std::uint16_t packet_id);
// Packet id of PUBACK, SUBACK and UNSUBACK.
std::uint16_t parse_packet_id(const Packet& p);
Packet make_empty(PacketType type);

}  // namespace aurcap::net::mqtt
