#pragma once

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <thread>

namespace aurcap::net {

struct Message {
  std::string topic;
  std::string payload;
  int qos = 0;
  bool retained = false;
};

using MessageHandler = std::function<void(const Message&)>;
using SubscriptionId = std::uint64_t;

// Handler guard: once cancel() returns, the handler is not running and will
// not run again. cancel() may be called from inside the handler.
class HandlerBox {
 public:
  explicit HandlerBox(MessageHandler h) : handler_(std::move(h)) {}
  void invoke(const Message& m) {
    std::lock_guard lock(mutex_);
    if (active_) handler_(m);
  }
  void cancel() {
    std::lock_guard lock(mutex_);
    active_ = false;
  }

 private:
  std::recursive_mutex mutex_;
  MessageHandler handler_;
  bool active_ = true;
};

// Publish/subscribe transport used by the skill bindings. Handlers run on a
// delivery thread owned by the implementation, in publication order.
class MessageBroker {
 public:
  virtual ~MessageBroker() = default;
  virtual void publish(const Message& message) = 0;
  // Retained messages matching the filter are delivered first.
  virtual SubscriptionId subscribe(const std::string& filter, MessageHandler handler, int qos = 1) = 0;
  virtual void unsubscribe(SubscriptionId id) = 0;
  virtual std::string uri() const = 0;
};

bool is_valid_topic(std::string_view topic) noexcept;
bool is_valid_filter(std::string_view filter) noexcept;
// MQTT wildcard matching: '+' one level, '#' the remainder.
bool topic_matches(std::string_view filter, std::string_view topic) noexcept;

// Single worker draining a FIFO of jobs.
class SerialExecutor {
 public:
  SerialExecutor();
  ~SerialExecutor();
  SerialExecutor(const SerialExecutor&) = delete;
  SerialExecutor& operator=(const SerialExecutor&) = delete;

  void post(std::function<void()> job);
  // Blocks until every job posted before the call has run.
  void drain();
  void stop();

 private:
  void run();

  std::mutex mutex_;
  std::condition_variable cv_;
  std::deque<std::function<void()>> jobs_;
  bool stopping_ = false;
  bool busy_ = false;
  std::thread worker_;
};

// Broker living in the current process. Named instances are reachable by
// "inproc://<name>" URIs while they exist.
class InProcessBroker final : public MessageBroker {
 public:
  explicit InProcessBroker(std::string name = {});
  ~InProcessBroker() override;

  void publish(const Message& message) override;
  SubscriptionId subscribe(const std::string& filter, MessageHandler handler, int qos = 1) override;
  void unsubscribe(SubscriptionId id) override;
  std::string uri() const override { return "inproc://" + name_; }

  void drain() { delivery_.drain(); }
  std::size_t retained_count() const;

  static std::shared_ptr<InProcessBroker> find(const std::string& name);
  static std::shared_ptr<InProcessBroker> create(std::string name);

 private:
  struct Subscription {
    std::string filter;
    std::shared_ptr<HandlerBox> handler;
  };

  std::string name_;
  mutable std::mutex mutex_;
  std::map<SubscriptionId, Subscription> subscriptions_;
  std::map<std::string, Message> retained_;
  SubscriptionId next_id_ = 1;
  SerialExecutor delivery_;
};

}  // namespace aurcap::net
