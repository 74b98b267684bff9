#include <httplib.h>

#include <condition_variable>
#include <deque>
#include <thread>

#include "aurcap/error.hpp"
#include "aurcap/interfaces/bindings.hpp"
#include "aurcap/net/mqtt_client.hpp"

namespace aurcap::interfaces {

namespace {

using SteadyClock = std::chrono::steady_clock;
using std::chrono::milliseconds;

milliseconds remaining(SteadyClock::time_point deadline) {
  return std::max(milliseconds(0), std::chrono::duration_cast<milliseconds>(deadline - SteadyClock::now()));
}

class MqttInvocation final : public RemoteInvocation {
 public:
  MqttInvocation(const Descriptor& d, const wire::CommandMessage& command, const RemoteOptions& options) {
    correlation_id_ = *command.correlation_id;
    const auto deadline = SteadyClock::now() + options.deadline;
    broker_ = options.broker;
    while (!broker_) {
      try {
        broker_ = net::connect_broker(d.broker_uri);
      } catch (const Error& e) {
        if (remaining(deadline).count() == 0) throw Error(Errc::Timeout, e.detail());
        std::this_thread::sleep_for(std::min(milliseconds(100), remaining(deadline)));
      }
    }
    try {
      state_sub_ = broker_->subscribe(d.state_topic, [this](const net::Message& m) { on_state(m); }, d.qos);
      rejected_sub_ =
          broker_->subscribe(rejected_topic(d.command_topic), [this](const net::Message& m) { on_rejected(m); }, d.qos);
      broker_->publish({d.command_topic, wire::to_json(command), d.qos, false});
    } catch (const Error& e) {
      unsubscribe();
      if (e.code() == Errc::BrokerUnreachable) throw Error(Errc::Timeout, e.detail());
      throw;
    }

    std::unique_lock lock(mutex_);
    const auto ours = [&] {
      while (!queue_.empty() && queue_.front().correlation_id != correlation_id_) {
        prior_ = queue_.front();
        queue_.pop_front();
      }
      return !queue_.empty();
    };
    const bool done = cv_.wait_until(lock, deadline, [&] { return rejection_.has_value() || ours(); });
    if (!done || rejection_) {
      lock.unlock();
      unsubscribe();
      if (!done) throw Error(Errc::Timeout, "no state change for " + correlation_id_ + " from " + d.state_topic);
      throw Error(Errc::Rejected, *rejection_);
    }
    initial_ = queue_.front();
    queue_.pop_front();
    last_sequence_ = initial_.sequence;
    if (prior_ && prior_->sequence >= initial_.sequence) prior_.reset();
  }

  ~MqttInvocation() override { unsubscribe(); }

  std::optional<wire::StateMessage> next(milliseconds timeout) override {
    std::unique_lock lock(mutex_);
    const auto fresh = [&] {
      while (!queue_.empty() && queue_.front().sequence <= last_sequence_) queue_.pop_front();
      return !queue_.empty();
    };
    if (!cv_.wait_for(lock, timeout, fresh)) return std::nullopt;
    auto out = queue_.front();
    queue_.pop_front();
    last_sequence_ = out.sequence;
    return out;
  }

 private:
  void on_state(const net::Message& m) {
    try {
      auto s = wire::parse_state(m.payload);
      {
        std::lock_guard lock(mutex_);
        queue_.push_back(std::move(s));
      }
      cv_.notify_all();
    } catch (const Error&) {
      // not ours to judge; other publishers may share the topic
    }
  }

  void on_rejected(const net::Message& m) {
    try {
      auto r = wire::parse_rejection(m.payload);
      if (r.correlation_id != correlation_id_) return;
      {
        std::lock_guard lock(mutex_);
        rejection_ = r.reason;
      }
      cv_.notify_all();
    } catch (const Error&) {
    }
  }

  void unsubscribe() {
    if (!broker_) return;
    for (auto* id : {&state_sub_, &rejected_sub_}) {
      if (*id == 0) continue;
      try {
        broker_->unsubscribe(*id);
      } catch (const Error&) {
      }
      *id = 0;
    }
  }

  std::shared_ptr<net::MessageBroker> broker_;
  net::SubscriptionId state_sub_ = 0;
  net::SubscriptionId rejected_sub_ = 0;
  std::mutex mutex_;
  std::condition_variable cv_;
  std::deque<wire::StateMessage> queue_;
  std::optional<std::string> rejection_;
  std::uint64_t last_sequence_ = 0;
};

class HttpInvocation final : public RemoteInvocation {
 public:
  HttpInvocation(const Descriptor& d, const wire::CommandMessage& command, const RemoteOptions& options)
      : poll_interval_(options.poll_interval) {
    correlation_id_ = *command.correlation_id;
    const auto scheme_end = d.base_url.find("://");
    const auto path_start = d.base_url.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
    const auto origin = d.base_url.substr(0, path_start);
    const auto prefix = path_start == std::string::npos ? std::string{} : d.base_url.substr(path_start);
    resource_ = prefix + "/skills/" + encode_segment(d.skill.local_name());
    client_ = std::make_unique<httplib::Client>(origin);
    client_->set_connection_timeout(std::chrono::seconds(1));
    client_->set_read_timeout(std::chrono::seconds(5));

    const auto deadline = SteadyClock::now() + options.deadline;
    const auto path = resource_ + "/transitions/" + std::string(skill::to_string(command.command));
    const auto body = wire::to_json(command);
    if (auto res = client_->Get(resource_ + "/state"); res && res->status == 200) {
      try {
        prior_ = wire::parse_state(res->body);
      } catch (const Error&) {
      }
    }
    while (true) {
      auto res = client_->Post(path, body, "application/json");
      if (res) {
        if (res->status == 202) {
          initial_ = wire::parse_state(res->body);
          last_sequence_ = initial_.sequence;
          if (prior_ && prior_->sequence >= initial_.sequence) prior_.reset();
          return;
        }
        std::string reason = "HTTP " + std::to_string(res->status);
        try {
          reason = wire::parse_rejection(res->body).reason;
        } catch (const Error&) {
        }
        throw Error(Errc::Rejected, reason);
      }
      if (remaining(deadline).count() == 0)
        throw Error(Errc::Timeout, d.base_url + ": " + httplib::to_string(res.error()));
      std::this_thread::sleep_for(std::min(poll_interval_, remaining(deadline)));
    }
  }

  std::optional<wire::StateMessage> next(milliseconds timeout) override {
    const auto deadline = SteadyClock::now() + timeout;
    while (true) {
      if (auto res = client_->Get(resource_ + "/state"); res && res->status == 200) {
        try {
          auto s = wire::parse_state(res->body);
          if (s.sequence > last_sequence_) {
            last_sequence_ = s.sequence;
            return s;
          }
        } catch (const Error&) {
        }
      }
      if (remaining(deadline).count() == 0) return std::nullopt;
      std::this_thread::sleep_for(std::min(poll_interval_, remaining(deadline)));
    }
  }

 private:
  milliseconds poll_interval_;
  std::string resource_;
  std::unique_ptr<httplib::Client> client_;
  std::uint64_t last_sequence_ = 0;
};

}  // namespace

wire::StateMessage RemoteInvocation::wait_for(std::initializer_list<skill::SkillState> states, milliseconds timeout) {
  const auto matches = [&](skill::SkillState s) { return std::find(states.begin(), states.end(), s) != states.end(); };
  if (matches(initial_.state)) return initial_;
  const auto deadline = SteadyClock::now() + timeout;
  while (true) {
    auto s = next(remaining(deadline));
    if (!s) throw Error(Errc::Timeout, "skill " + initial_.skill + " did not reach the awaited state");
    if (matches(s->state)) return *s;
  }
}

std::unique_ptr<RemoteInvocation> invoke_remote(const Descriptor& descriptor, wire::CommandMessage command,
                                                const RemoteOptions& options) {
  if (!command.correlation_id) command.correlation_id = wire::new_uuid();
  switch (descriptor.kind) {
    case InterfaceKind::Mqtt:
      return std::make_unique<MqttInvocation>(descriptor, command, options);
    case InterfaceKind::Http:
      return std::make_unique<HttpInvocation>(descriptor, command, options);
    case InterfaceKind::OpcUa:
      break;
  }
  throw Error(Errc::InvalidMessage, "OPC UA interfaces are described, not served: " + descriptor.id.str());
}

}  // namespace aurcap::interfaces
