#include "aurcap/net/mqtt_codec.hpp"

#include "aurcap/error.hpp"

namespace aurcap::net::mqtt {

namespace {

constexpr std::size_t kMaxRemaining = 268435455;

[[noreturn]] void malformed(const std::string& what) { throw Error(Errc::InvalidMessage, "mqtt: " + what); }

void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v >> 8));
  out.push_back(static_cast<char>(v & 0xFF));
}

void put_str(std::string& out, const std::string& s) {
  if (s.size() > 0xFFFF) malformed("string too long");
  put_u16(out, static_cast<std::uint16_t>(s.size()));
  out += s;
}

class Reader {
 public:
  explicit Reader(const std::string& s) : s_(s) {}
  std::uint8_t u8() {
    if (pos_ >= s_.size()) malformed("truncated packet");
    return static_cast<std::uint8_t>(s_[pos_++]);
  }
  std::uint16_t u16() {
    const auto hi = u8();
    return static_cast<std::uint16_t>((hi << 8) | u8());
  }
  std::string str() {
    const auto n = u16();
    if (pos_ + n > s_.size()) malformed("truncated string");
    auto out = s_.substr(pos_, n);
    pos_ += n;
    return out;
  }
  std::string rest() {
    auto out = s_.substr(pos_);
    pos_ = s_.size();
    return out;
  }
  bool done() const { return pos_ == s_.size(); }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;
};

void expect_type(const Packet& p, PacketType t) {
  if (p.type != t) malformed("unexpected packet type " + std::to_string(static_cast<int>(p.type)));
}

}  // namespace

std::string encode(const Packet& p) {
  if (p.body.size() > kMaxRemaining) malformed("packet too large");
  std::string out;
  out.push_back(static_cast<char>((static_cast<std::uint8_t>(p.type) << 4) | (p.flags & 0x0F)));
  std::size_t len = p.body.size();
  do {
    std::uint8_t byte = len % 128;
    len /= 128;
    if (len > 0) byte |= 0x80;
    out.push_back(static_cast<char>(byte));
  } while (len > 0);
  out += p.body;
  return out;
}

std::optional<Packet> decode(std::string& buffer) {
  if (buffer.size() < 2) return std::nullopt;
  std::size_t len = 0, multiplier = 1, i = 1;
  while (true) {
    if (i >= buffer.size()) return std::nullopt;
    if (i > 4) malformed("remaining length exceeds four bytes");
    const auto byte = static_cast<std::uint8_t>(buffer[i++]);
    len += (byte & 0x7F) * multiplier;
    multiplier *= 128;
    if (!(byte & 0x80)) break;
  }
  if (buffer.size() < i + len) return std::nullopt;
  const auto head = static_cast<std::uint8_t>(buffer[0]);
  const auto type = head >> 4;
  if (type == 0 || type == 15) malformed("reserved packet type");
  Packet p{static_cast<PacketType>(type), static_cast<std::uint8_t>(head & 0x0F), buffer.substr(i, len)};
  buffer.erase(0, i + len);
  return p;
}

Packet make_connect(const Connect& c) {
  std::string body;
  put_str(body, "MQTT");
  body.push_back(4);  // protocol level 3.1.1
  body.push_back(static_cast<char>(c.clean_session ? 0x02 : 0x00));
  put_u16(body, c.keep_alive);
  put_str(body, c.client_id);
  return {PacketType::Connect, 0, std::move(body)};
}

Connect parse_connect(const Packet& p) {
  expect_type(p, PacketType::Connect);
  Reader r(p.body);
  if (r.str() != "MQTT") malformed("unsupported protocol name");
  if (r.u8() != 4) malformed("unsupported protocol level");
  const auto flags = r.u8();
  Connect c;
  c.clean_session = flags & 0x02;
  c.keep_alive = r.u16();
  c.client_id = r.str();
  if (flags & 0x04) {  // will: topic and message
    r.str();
    r.str();
  }
  if (flags & 0x80) r.str();
  if (flags & 0x40) r.str();
  return c;
}

Packet make_connack(std::uint8_t return_code) { return {PacketType::Connack, 0, std::string{'\0', static_cast<char>(return_code)}}; }

std::uint8_t parse_connack(const Packet& p) {
  expect_type(p, PacketType::Connack);
  Reader r(p.body);
  r.u8();
  return r.u8();
}

Packet make_publish(const Publish& m) {
  if (m.qos < 0 || m.qos > 1) malformed("only QoS 0 and 1 are supported");
  std::string body;
  put_str(body, m.topic);
  if (m.qos > 0) put_u16(body, m.packet_id);
  body += m.payload;
  const std::uint8_t flags =
      static_cast<std::uint8_t>((m.dup ? 0x08 : 0) | (m.qos << 1) | (m.retain ? 0x01 : 0));
  return {PacketType::Publish, flags, std::move(body)};
}

Publish parse_publish(const Packet& p) {
  expect_type(p, PacketType::Publish);
  Publish m;
  m.qos = (p.flags >> 1) & 0x03;
  if (m.qos > 2) malformed("invalid QoS");
  m.retain = p.flags & 0x01;
  m.dup = p.flags & 0x08;
  Reader r(p.body);
  m.topic = r.str();
  if (m.qos > 0) m.packet_id = r.u16();
  m.payload = r.rest();
  return m;
}

Packet make_puback(std::uint16_t packet_id) {
  std::string body;
  put_u16(body, packet_id);
  return {PacketType::Puback, 0, std::move(body)};
}

Packet make_subscribe(const Subscribe& s) {
  std::string body;
  put_u16(body, s.packet_id);
  for (const auto& [filter, qos] : s.filters) {
    put_str(body, filter);
    body.push_back(static_cast<char>(qos));
  }
  return {PacketType::Subscribe, 0x02, std::move(body)};
}

Subscribe parse_subscribe(const Packet& p) {
  expect_type(p, PacketType::Subscribe);
  Reader r(p.body);
  Subscribe s;
  s.packet_id = r.u16();
  while (!r.done()) {
    auto filter = r.str();
    s.filters.emplace_back(std::move(filter), r.u8() & 0x03);
  }
  if (s.filters.empty()) malformed("subscribe without filters");
  return s;
}

Packet make_suback(std::uint16_t packet_id, const std::vector<std::uint8_t>& codes) {
  std::string body;
  put_u16(body, packet_id);
  for (auto c : codes) body.push_back(static_cast<char>(c));
  return {PacketType::Suback, 0, std::move(body)};
}

Packet make_unsubscribe(const Unsubscribe& u) {
  std::string body;
  put_u16(body, u.packet_id);
  for (const auto& f : u.filters) put_str(body, f);
  return {PacketType::Unsubscribe, 0x02, std::move(body)};
}

Unsubscribe parse_unsubscribe(const Packet& p) {
  expect_type(p, PacketType::Unsubscribe);
  Reader r(p.body);
  Unsubscribe u;
  u.packet_id = r.u16();
  while (!r.done()) u.filters.push_back(r.str());
  return u;
}

Packet make_unsuback(std::uint16_t packet_id) {
  std::string body;
  put_u16(body, packet_id);
  return {PacketType::Unsuback, 0, std::move(body)};
}

std::uint16_t parse_packet_id(const Packet& p) {
  Reader r(p.body);
  return r.u16();
}

Packet make_empty(PacketType type) { return {type, 0, {}}; }

}  // namespace aurcap::net::mqtt
