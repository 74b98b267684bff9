#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>

#include "aurcap/error.hpp"
#include "aurcap/interfaces/bindings.hpp"
#include "aurcap/planning/executor.hpp"
#include "aurcap/planning/match.hpp"
#include "aurcap/planning/planner.hpp"

namespace aurcap::fleet {

// JSON bodies shared by the registry API and the CLI.
std::string to_json(const interfaces::Descriptor& d);
std::string to_json(const planning::Plan& plan);
std::string to_json(const planning::Unsatisfiable& u);
std::string to_json(const planning::ExecutionReport& report);
std::string to_json(const std::vector<planning::Match>& matches);
std::string error_json(const Error& e);

struct RegistryOptions {
  planning::PlannerConfig planner;
  planning::ExecutorOptions executor;
  interfaces::RemoteOptions remote;
};

// Registration and mission service over a KB it owns.
//   POST /registry/models           Turtle body, merged into the KB
//   GET  /registry/robots           ?capabilityType=&modality=
//   POST /missions                  mission Turtle; planned immediately
//   POST /missions/{id}/execute
//   GET  /missions/{id}             plan and live report
class Registry {
 public:
  explicit Registry(KnowledgeBase kb, RegistryOptions options = {});
  ~Registry();
  Registry(const Registry&) = delete;
  Registry& operator=(const Registry&) = delete;

  // Serves on a background thread. Port 0 picks a free one. Throws
  // PortUnavailable.
  void listen(const std::string& host, std::uint16_t port);
  std::uint16_t port() const;
  std::string base_url() const;
  // Stops serving and waits for running missions.
  void stop();

  // KB writes are serialized; reads share the lock.
  void write(const std::function<void(KnowledgeBase&)>& f);
  void read(const std::function<void(const KnowledgeBase&)>& f) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace aurcap::fleet
