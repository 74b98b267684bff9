#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <string>

#include "aurcap/net/broker.hpp"

namespace aurcap::net {

struct MqttClientOptions {
  std::string host = "127.0.0.1";
  std::uint16_t port = 1883;
  std::string client_id;  // empty: generated
  std::uint16_t keep_alive_s = 30;
  std::chrono::milliseconds timeout{3000};  // connect, SUBACK, PUBACK
};

// MQTT 3.1.1 client over TCP. Throws BrokerUnreachable when the broker does
// not answer, or once the connection has been lost.
class MqttClient final : public MessageBroker {
 public:
  explicit MqttClient(MqttClientOptions options);
  ~MqttClient() override;

  void publish(const Message& message) override;
  SubscriptionId subscribe(const std::string& filter, MessageHandler handler, int qos = 1) override;
  void unsubscribe(SubscriptionId id) override;
  std::string uri() const override;

  bool connected() const;
  void disconnect();

 private:
  struct State;
  std::shared_ptr<State> state_;
};

// "mqtt://host:port" or "inproc://name". Throws BrokerUnreachable.
std::shared_ptr<MessageBroker> connect_broker(const std::string& uri, const std::string& client_id = {});

// Minimal MQTT broker over TCP, backed by an InProcessBroker. QoS 1 is
// acknowledged but not redelivered.
class MqttTcpBroker {
 public:
  // Port 0 picks an ephemeral port. Throws PortUnavailable.
  explicit MqttTcpBroker(std::uint16_t port = 0, std::string host = "127.0.0.1");
  ~MqttTcpBroker();
  MqttTcpBroker(const MqttTcpBroker&) = delete;
  MqttTcpBroker& operator=(const MqttTcpBroker&) = delete;

  std::uint16_t port() const;
  std::string uri() const;
  std::size_t connection_count() const;
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace aurcap::net
