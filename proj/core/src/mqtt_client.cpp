#include "aurcap/net/mqtt_client.hpp"

#include <spdlog/spdlog.h>

#include <atomic>
#include <condition_variable>
#include <map>
#include <optional>
#include <set>
#include <thread>

#include "aurcap/error.hpp"
#include "aurcap/net/mqtt_codec.hpp"
#include "aurcap/net/wire.hpp"
#include "socket.hpp"

namespace aurcap::net {

namespace {

std::string generated_client_id() { return "aurcap-" + wire::new_uuid().substr(0, 8); }

}  // namespace

struct MqttClient::State {
  MqttClientOptions options;
  detail::Socket socket;
  std::mutex write_mutex;
  std::mutex subscribe_mutex;  // one SUBSCRIBE in flight, see fresh_

  mutable std::mutex mutex;
  std::condition_variable cv;
  bool open = false;
  std::map<std::uint16_t, std::optional<mqtt::Packet>> acks;  // awaited acks by packet id
  std::uint16_t next_packet_id = 1;
  struct Sub {
    std::string filter;
    std::shared_ptr<HandlerBox> handler;
  };
  std::map<SubscriptionId, Sub> subs;
  SubscriptionId next_sub = 1;
  // Retained messages follow the SUBACK of the subscription that asked for
  // them; only that subscription receives them.
  std::set<SubscriptionId> fresh;
  std::map<std::uint16_t, SubscriptionId> pending_subs;
  std::chrono::steady_clock::time_point last_write = std::chrono::steady_clock::now();

  SerialExecutor delivery;
  std::thread reader;

  std::uint16_t allocate_id() {
    std::uint16_t id;
    do {
      id = next_packet_id++;
      if (next_packet_id == 0) next_packet_id = 1;
    } while (acks.count(id));
    acks[id] = std::nullopt;
    return id;
  }

  bool send(const mqtt::Packet& p) {
    std::lock_guard lock(write_mutex);
    last_write = std::chrono::steady_clock::now();
    return socket.send_all(mqtt::encode(p));
  }

  // Waits for the ack registered under `id`.
  mqtt::Packet await_ack(std::unique_lock<std::mutex>& lock, std::uint16_t id, const char* what) {
    const bool ok = cv.wait_for(lock, options.timeout, [&] { return acks[id].has_value() || !open; });
    auto packet = std::move(acks[id]);
    acks.erase(id);
    if (!ok || !packet) throw Error(Errc::BrokerUnreachable, std::string("no ") + what + " from " + options.host);
    return std::move(*packet);
  }

  void mark_closed() {
    {
      std::lock_guard lock(mutex);
      open = false;
    }
    cv.notify_all();
  }

  void dispatch(const mqtt::Publish& pub) {
    Message m{pub.topic, pub.payload, pub.qos, pub.retain};
    std::lock_guard lock(mutex);
    for (const auto& [id, sub] : subs) {
      if (!topic_matches(sub.filter, m.topic)) continue;
      if (m.retained && !fresh.count(id)) continue;
      delivery.post([h = sub.handler, m] { h->invoke(m); });
    }
  }

  void run() {
    std::string buffer;
    const auto keep_alive = std::chrono::seconds(options.keep_alive_s);
    while (true) {
      const auto idle = std::chrono::steady_clock::now() - last_write;
      if (keep_alive.count() > 0 && idle >= keep_alive / 2) {
        if (!send(mqtt::make_empty(mqtt::PacketType::Pingreq))) break;
      }
      if (!socket.wait_readable(std::chrono::milliseconds(200))) {
        std::lock_guard lock(mutex);
        if (!open) break;
        continue;
      }
      if (!socket.recv_some(buffer)) break;
      try {
        while (auto packet = mqtt::decode(buffer)) handle(*packet);
      } catch (const Error& e) {
        spdlog::warn("mqtt client {}: {}", options.client_id, e.what());
        break;
      }
    }
    mark_closed();
  }

  void handle(const mqtt::Packet& p) {
    switch (p.type) {
      case mqtt::PacketType::Publish: {
        auto pub = mqtt::parse_publish(p);
        if (pub.qos == 1) send(mqtt::make_puback(pub.packet_id));
        dispatch(pub);
        break;
      }
      case mqtt::PacketType::Suback:
      case mqtt::PacketType::Puback:
      case mqtt::PacketType::Unsuback: {
        const auto id = mqtt::parse_packet_id(p);
        {
          std::lock_guard lock(mutex);
          if (p.type == mqtt::PacketType::Suback) {
            fresh.clear();
            if (auto it = pending_subs.find(id); it != pending_subs.end()) {
              fresh.insert(it->second);
              pending_subs.erase(it);
            }
          }
          if (auto it = acks.find(id); it != acks.end()) it->second = p;
        }
        cv.notify_all();
        break;
      }
      default:
        break;
    }
  }
};

MqttClient::MqttClient(MqttClientOptions options) : state_(std::make_shared<State>()) {
  auto& st = *state_;
  if (options.client_id.empty()) options.client_id = generated_client_id();
  st.options = std::move(options);
  st.socket = detail::Socket::connect(st.options.host, st.options.port, st.options.timeout);
  mqtt::Connect connect{st.options.client_id, st.options.keep_alive_s, true};
  if (!st.send(mqtt::make_connect(connect))) throw Error(Errc::BrokerUnreachable, "connection closed during CONNECT");
  // CONNACK is read synchronously, before the reader starts.
  std::string buffer;
  const auto deadline = std::chrono::steady_clock::now() + st.options.timeout;
  std::optional<mqtt::Packet> connack;
  while (!connack) {
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0 || !st.socket.wait_readable(left) || !st.socket.recv_some(buffer))
      throw Error(Errc::BrokerUnreachable, "no CONNACK from " + st.options.host);
    connack = mqtt::decode(buffer);
  }
  if (connack->type != mqtt::PacketType::Connack) throw Error(Errc::BrokerUnreachable, "expected CONNACK");
  if (const auto rc = mqtt::parse_connack(*connack); rc != 0)
    throw Error(Errc::BrokerUnreachable, "connection refused, code " + std::to_string(rc));
  st.open = true;
  st.reader = std::thread([s = state_.get()] { s->run(); });
}

MqttClient::~MqttClient() {
  disconnect();
  if (state_->reader.joinable()) state_->reader.join();
  state_->delivery.stop();
}

void MqttClient::disconnect() {
  auto& st = *state_;
  {
    std::lock_guard lock(st.mutex);
    if (!st.open) return;
  }
  st.send(mqtt::make_empty(mqtt::PacketType::Disconnect));
  st.socket.shutdown();
  st.mark_closed();
}

bool MqttClient::connected() const {
  std::lock_guard lock(state_->mutex);
  return state_->open;
}

std::string MqttClient::uri() const {
  return "mqtt://" + state_->options.host + ":" + std::to_string(state_->options.port);
}

void MqttClient::publish(const Message& message) {
  if (!is_valid_topic(message.topic)) throw Error(Errc::TopicEncodingError, "invalid topic '" + message.topic + "'");
  auto& st = *state_;
  mqtt::Publish pub{message.topic, message.payload, message.qos > 0 ? 1 : 0, message.retained, false, 0};
  std::unique_lock lock(st.mutex);
  if (!st.open) throw Error(Errc::BrokerUnreachable, "not connected to " + st.options.host);
  if (pub.qos == 0) {
    lock.unlock();
    if (!st.send(mqtt::make_publish(pub))) throw Error(Errc::BrokerUnreachable, "connection lost");
    return;
  }
  pub.packet_id = st.allocate_id();
  lock.unlock();
  const bool sent = st.send(mqtt::make_publish(pub));
  lock.lock();
  if (!sent) {
    st.acks.erase(pub.packet_id);
    throw Error(Errc::BrokerUnreachable, "connection lost");
  }
  st.await_ack(lock, pub.packet_id, "PUBACK");
}

SubscriptionId MqttClient::subscribe(const std::string& filter, MessageHandler handler, int qos) {
  if (!is_valid_filter(filter)) throw Error(Errc::TopicEncodingError, "invalid filter '" + filter + "'");
  auto& st = *state_;
  std::lock_guard one_at_a_time(st.subscribe_mutex);
  std::unique_lock lock(st.mutex);
  if (!st.open) throw Error(Errc::BrokerUnreachable, "not connected to " + st.options.host);
  const auto sid = st.next_sub++;
  st.subs[sid] = {filter, std::make_shared<HandlerBox>(std::move(handler))};
  const auto pid = st.allocate_id();
  st.pending_subs[pid] = sid;
  lock.unlock();
  const bool sent = st.send(mqtt::make_subscribe({pid, {{filter, qos > 0 ? 1 : 0}}}));
  lock.lock();
  try {
    if (!sent) throw Error(Errc::BrokerUnreachable, "connection lost");
    const auto ack = st.await_ack(lock, pid, "SUBACK");
    if (ack.body.size() < 3 || static_cast<std::uint8_t>(ack.body[2]) == 0x80)
      throw Error(Errc::BrokerUnreachable, "subscription to '" + filter + "' refused");
  } catch (...) {
    st.acks.erase(pid);
    st.pending_subs.erase(pid);
    st.subs.erase(sid);
    throw;
  }
  return sid;
}

void MqttClient::unsubscribe(SubscriptionId id) {
  auto& st = *state_;
  std::shared_ptr<HandlerBox> box;
  std::string filter;
  bool shared_filter = false;
  {
    std::lock_guard lock(st.mutex);
    auto it = st.subs.find(id);
    if (it == st.subs.end()) return;
    box = it->second.handler;
    filter = it->second.filter;
    st.subs.erase(it);
    st.fresh.erase(id);
    for (const auto& [other, sub] : st.subs) shared_filter = shared_filter || sub.filter == filter;
  }
  box->cancel();
  if (shared_filter) return;
  std::unique_lock lock(st.mutex);
  if (!st.open) return;
  const auto pid = st.allocate_id();
  lock.unlock();
  const bool sent = st.send(mqtt::make_unsubscribe({pid, {filter}}));
  lock.lock();
  if (!sent) {
    st.acks.erase(pid);
    return;
  }
  try {
    st.await_ack(lock, pid, "UNSUBACK");
  } catch (const Error&) {
    // the local handler is already gone; a lost ack only leaks broker state
  }
}

std::shared_ptr<MessageBroker> connect_broker(const std::string& uri, const std::string& client_id) {
  constexpr std::string_view inproc = "inproc://";
  constexpr std::string_view mqtt = "mqtt://";
  if (uri.rfind(inproc, 0) == 0) {
    auto broker = InProcessBroker::find(uri.substr(inproc.size()));
    if (!broker) throw Error(Errc::BrokerUnreachable, "no in-process broker at " + uri);
    return broker;
  }
  if (uri.rfind(mqtt, 0) == 0) {
    const auto rest = uri.substr(mqtt.size());
    const auto colon = rest.rfind(':');
    MqttClientOptions opts;
    opts.client_id = client_id;
    opts.host = rest.substr(0, colon);
    if (colon != std::string::npos) {
      try {
        const auto port = std::stoul(rest.substr(colon + 1));
        if (port == 0 || port > 65535) throw std::out_of_range("port");
        opts.port = static_cast<std::uint16_t>(port);
      } catch (const std::logic_error&) {
        throw Error(Errc::BrokerUnreachable, "invalid port in " + uri);
      }
    }
    if (opts.host.empty()) throw Error(Errc::BrokerUnreachable, "missing host in " + uri);
    return std::make_shared<MqttClient>(std::move(opts));
  }
  throw Error(Errc::BrokerUnreachable, "unsupported broker URI " + uri);
}

}  // namespace aurcap::net
