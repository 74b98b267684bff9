#include <spdlog/spdlog.h>

#include <atomic>
#include <list>
#include <thread>

#include "aurcap/error.hpp"
#include "aurcap/net/mqtt_client.hpp"
#include "aurcap/net/mqtt_codec.hpp"
#include "socket.hpp"

namespace aurcap::net {

namespace {

struct Connection {
  detail::Socket socket;
  std::mutex write_mutex;
  std::thread thread;
  std::atomic<bool> done{false};
  std::map<std::string, SubscriptionId> subscriptions;  // by filter
  std::uint16_t next_packet_id = 1;

  bool send(const mqtt::Packet& p) {
    std::lock_guard lock(write_mutex);
    return socket.send_all(mqtt::encode(p));
  }

  void forward(const Message& m, int granted_qos) {
    mqtt::Publish pub{m.topic, m.payload, std::min(m.qos, granted_qos), m.retained, false, 0};
    if (pub.qos > 0) {
      std::lock_guard lock(write_mutex);
      pub.packet_id = next_packet_id++;
      if (next_packet_id == 0) next_packet_id = 1;
      socket.send_all(mqtt::encode(mqtt::make_publish(pub)));
      return;
    }
    send(mqtt::make_publish(pub));
  }
};

}  // namespace

struct MqttTcpBroker::Impl {
  std::string host;
  detail::Socket listener;
  std::uint16_t port = 0;
  InProcessBroker core;
  std::atomic<bool> stopping{false};
  std::thread acceptor;
  mutable std::mutex mutex;
  std::list<std::shared_ptr<Connection>> connections;

  void accept_loop() {
    while (!stopping) {
      if (!listener.wait_readable(std::chrono::milliseconds(100))) continue;
      auto s = listener.accept();
      if (!s.valid()) continue;
      auto conn = std::make_shared<Connection>();
      conn->socket = std::move(s);
      std::lock_guard lock(mutex);
      reap();
      connections.push_back(conn);
      conn->thread = std::thread([this, conn] { serve(*conn); });
    }
  }

  void reap() {
    for (auto it = connections.begin(); it != connections.end();) {
      if ((*it)->done) {
        if ((*it)->thread.joinable()) (*it)->thread.join();
        it = connections.erase(it);
      } else {
        ++it;
      }
    }
  }

  void serve(Connection& conn) {
    std::string buffer;
    bool connected = false;
    try {
      while (!stopping && conn.socket.recv_some(buffer)) {
        while (auto packet = mqtt::decode(buffer)) {
          if (!connected && packet->type != mqtt::PacketType::Connect)
            throw Error(Errc::InvalidMessage, "first packet must be CONNECT");
          if (!handle(conn, *packet, connected)) goto closed;
        }
      }
    } catch (const Error& e) {
      spdlog::debug("mqtt broker: dropping connection: {}", e.what());
    }
  closed:
    for (const auto& [filter, id] : conn.subscriptions) core.unsubscribe(id);
    conn.subscriptions.clear();
    conn.socket.shutdown();
    conn.done = true;
  }

  // Returns false on DISCONNECT.
  bool handle(Connection& conn, const mqtt::Packet& p, bool& connected) {
    switch (p.type) {
      case mqtt::PacketType::Connect:
        if (connected) throw Error(Errc::InvalidMessage, "second CONNECT");
        mqtt::parse_connect(p);
        connected = true;
        conn.send(mqtt::make_connack(0));
        return true;
      case mqtt::PacketType::Publish: {
        const auto pub = mqtt::parse_publish(p);
        if (pub.qos > 1) throw Error(Errc::InvalidMessage, "QoS 2 is not supported");
        try {
          core.publish({pub.topic, pub.payload, pub.qos, pub.retain});
        } catch (const Error& e) {
          throw Error(Errc::InvalidMessage, e.detail());
        }
        if (pub.qos == 1) conn.send(mqtt::make_puback(pub.packet_id));
        return true;
      }
      case mqtt::PacketType::Subscribe: {
        const auto sub = mqtt::parse_subscribe(p);
        std::vector<std::uint8_t> codes;
        for (const auto& [filter, qos] : sub.filters)
          codes.push_back(is_valid_filter(filter) ? static_cast<std::uint8_t>(std::min(qos, 1)) : 0x80);
        // SUBACK goes out before any retained message the subscription triggers.
        conn.send(mqtt::make_suback(sub.packet_id, codes));
        for (std::size_t i = 0; i < sub.filters.size(); ++i) {
          if (codes[i] == 0x80) continue;
          const auto& filter = sub.filters[i].first;
          if (auto it = conn.subscriptions.find(filter); it != conn.subscriptions.end()) {
            core.unsubscribe(it->second);
            conn.subscriptions.erase(it);
          }
          const int granted = codes[i];
          conn.subscriptions[filter] =
              core.subscribe(filter, [&conn, granted](const Message& m) { conn.forward(m, granted); });
        }
        return true;
      }
      case mqtt::PacketType::Unsubscribe: {
        const auto unsub = mqtt::parse_unsubscribe(p);
        for (const auto& f : unsub.filters) {
          if (auto it = conn.subscriptions.find(f); it != conn.subscriptions.end()) {
            core.unsubscribe(it->second);
            conn.subscriptions.erase(it);
          }
        }
        conn.send(mqtt::make_unsuback(unsub.packet_id));
        return true;
      }
      case mqtt::PacketType::Pingreq:
        conn.send(mqtt::make_empty(mqtt::PacketType::Pingresp));
        return true;
      case mqtt::PacketType::Puback:
        return true;
      case mqtt::PacketType::Disconnect:
        return false;
      default:
        throw Error(Errc::InvalidMessage, "unexpected packet type " + std::to_string(static_cast<int>(p.type)));
    }
  }
};

MqttTcpBroker::MqttTcpBroker(std::uint16_t port, std::string host) : impl_(std::make_unique<Impl>()) {
  impl_->host = std::move(host);
  impl_->listener = detail::Socket::listen(impl_->host, port);
  impl_->port = impl_->listener.local_port();
  impl_->acceptor = std::thread([impl = impl_.get()] { impl->accept_loop(); });
}

MqttTcpBroker::~MqttTcpBroker() { stop(); }

void MqttTcpBroker::stop() {
  if (impl_->stopping.exchange(true)) return;
  if (impl_->acceptor.joinable()) impl_->acceptor.join();
  std::list<std::shared_ptr<Connection>> conns;
  {
    std::lock_guard lock(impl_->mutex);
    conns.swap(impl_->connections);
  }
  for (auto& c : conns) c->socket.shutdown();
  for (auto& c : conns)
    if (c->thread.joinable()) c->thread.join();
  impl_->core.drain();
  impl_->listener.close();
}

std::uint16_t MqttTcpBroker::port() const { return impl_->port; }

std::string MqttTcpBroker::uri() const { return "mqtt://" + impl_->host + ":" + std::to_string(impl_->port); }

std::size_t MqttTcpBroker::connection_count() const {
  std::lock_guard lock(impl_->mutex);
  std::size_t n = 0;
  for (const auto& c : impl_->connections) n += c->done ? 0 : 1;
  return n;
}

}  // namespace aurcap::net
