#include "aurcap/net/broker.hpp"

#include <vector>

#include "aurcap/error.hpp"

namespace aurcap::net {

namespace {

std::vector<std::string_view> levels(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto slash = s.find('/', start);
    out.push_back(s.substr(start, slash == std::string_view::npos ? std::string_view::npos : slash - start));
    if (slash == std::string_view::npos) break;
    start = slash + 1;
  }
  return out;
}

std::mutex registry_mutex;
std::map<std::string, std::weak_ptr<InProcessBroker>>& registry() {
  static std::map<std::string, std::weak_ptr<InProcessBroker>> r;
  return r;
}

}  // namespace

bool is_valid_topic(std::string_view topic) noexcept {
  if (topic.empty() || topic.size() > 65535) return false;
  return topic.find_first_of("+#") == std::string_view::npos && topic.find('\0') == std::string_view::npos;
}

bool is_valid_filter(std::string_view filter) noexcept {
  if (filter.empty() || filter.size() > 65535) return false;
  const auto parts = levels(filter);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const auto p = parts[i];
    if (p.find('#') != std::string_view::npos && (p != "#" || i + 1 != parts.size())) return false;
    if (p.find('+') != std::string_view::npos && p != "+") return false;
  }
  return true;
}

bool topic_matches(std::string_view filter, std::string_view topic) noexcept {
  const auto f = levels(filter);
  const auto t = levels(topic);
  std::size_t i = 0;
  for (; i < f.size(); ++i) {
    if (f[i] == "#") return true;
    if (i >= t.size()) return false;
    if (f[i] != "+" && f[i] != t[i]) return false;
  }
  return i == t.size();
}

SerialExecutor::SerialExecutor() : worker_([this] { run(); }) {}

SerialExecutor::~SerialExecutor() { stop(); }

void SerialExecutor::post(std::function<void()> job) {
  {
    std::lock_guard lock(mutex_);
    if (stopping_) return;
    jobs_.push_back(std::move(job));
  }
  cv_.notify_all();
}

void SerialExecutor::drain() {
  std::unique_lock lock(mutex_);
  if (std::this_thread::get_id() == worker_.get_id()) return;
  cv_.wait(lock, [&] { return (jobs_.empty() && !busy_) || stopping_; });
}

void SerialExecutor::stop() {
  {
    std::lock_guard lock(mutex_);
    stopping_ = true;
  }
  cv_.notify_all();
  if (worker_.joinable() && std::this_thread::get_id() != worker_.get_id()) worker_.join();
}

void SerialExecutor::run() {
  std::unique_lock lock(mutex_);
  while (true) {
    cv_.wait(lock, [&] { return !jobs_.empty() || stopping_; });
    if (stopping_) return;
    auto job = std::move(jobs_.front());
    jobs_.pop_front();
    busy_ = true;
    lock.unlock();
    try {
      job();
    } catch (...) {
      // a failing handler must not take the delivery thread down
    }
    lock.lock();
    busy_ = false;
    cv_.notify_all();
  }
}

InProcessBroker::InProcessBroker(std::string name) : name_(std::move(name)) {}

InProcessBroker::~InProcessBroker() {
  delivery_.stop();
  if (!name_.empty()) {
    std::lock_guard lock(registry_mutex);
    auto it = registry().find(name_);
    if (it != registry().end() && it->second.expired()) registry().erase(it);
  }
}

std::shared_ptr<InProcessBroker> InProcessBroker::create(std::string name) {
  auto broker = std::make_shared<InProcessBroker>(name);
  std::lock_guard lock(registry_mutex);
  auto& slot = registry()[name];
  if (!slot.expired()) throw Error(Errc::DuplicateId, "in-process broker '" + name + "' exists");
  slot = broker;
  return broker;
}

std::shared_ptr<InProcessBroker> InProcessBroker::find(const std::string& name) {
  std::lock_guard lock(registry_mutex);
  auto it = registry().find(name);
  return it == registry().end() ? nullptr : it->second.lock();
}

void InProcessBroker::publish(const Message& message) {
  if (!is_valid_topic(message.topic)) throw Error(Errc::TopicEncodingError, "invalid topic '" + message.topic + "'");
  std::lock_guard lock(mutex_);
  if (message.retained) {
    if (message.payload.empty())
      retained_.erase(message.topic);
    else
      retained_[message.topic] = message;
  }
  for (const auto& [id, sub] : subscriptions_) {
    if (!topic_matches(sub.filter, message.topic)) continue;
    Message copy = message;
    copy.retained = false;
    delivery_.post([handler = sub.handler, copy = std::move(copy)] { handler->invoke(copy); });
  }
}

SubscriptionId InProcessBroker::subscribe(const std::string& filter, MessageHandler handler, int) {
  if (!is_valid_filter(filter)) throw Error(Errc::TopicEncodingError, "invalid filter '" + filter + "'");
  std::lock_guard lock(mutex_);
  const auto id = next_id_++;
  auto h = std::make_shared<HandlerBox>(std::move(handler));
  subscriptions_[id] = {filter, h};
  for (const auto& [topic, msg] : retained_)
    if (topic_matches(filter, topic)) delivery_.post([h, msg] { h->invoke(msg); });
  return id;
}

void InProcessBroker::unsubscribe(SubscriptionId id) {
  std::shared_ptr<HandlerBox> box;
  {
    std::lock_guard lock(mutex_);
    auto it = subscriptions_.find(id);
    if (it == subscriptions_.end()) return;
    box = it->second.handler;
    subscriptions_.erase(it);
  }
  box->cancel();
}

std::size_t InProcessBroker::retained_count() const {
  std::lock_guard lock(mutex_);
  return retained_.size();
}

}  // namespace aurcap::net
