#pragma once

#include <chrono>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "aurcap/interfaces/bindings.hpp"
#include "aurcap/planning/planner.hpp"

namespace aurcap::planning {

// Sends commands to skills. The default goes through invoke_remote.
class SkillInvoker {
 public:
  virtual ~SkillInvoker() = default;
  virtual std::unique_ptr<interfaces::RemoteInvocation> invoke(const interfaces::Descriptor& d,
                                                               const wire::CommandMessage& command) = 0;
};

class RemoteSkillInvoker final : public SkillInvoker {
 public:
  explicit RemoteSkillInvoker(interfaces::RemoteOptions options = {}) : options_(std::move(options)) {}
  std::unique_ptr<interfaces::RemoteInvocation> invoke(const interfaces::Descriptor& d,
                                                       const wire::CommandMessage& command) override {
    return interfaces::invoke_remote(d, command, options_);
  }

 private:
  interfaces::RemoteOptions options_;
};

enum class MissionStatus { Pending, Running, Succeeded, Failed };
std::string_view to_string(MissionStatus s) noexcept;

struct StepReport {
  Iri step;
  Iri robot;
  Iri capability;
  Iri skill;
  bool started = false;
  std::optional<skill::SkillState> terminal;
  // From the state the skill was in when Start was sent to the final state.
  std::vector<wire::StateMessage> trajectory;
  std::string failure;
};

struct ExecutionReport {
  Iri mission;
  MissionStatus status = MissionStatus::Pending;
  std::optional<Iri> failed_step;
  std::string reason;
  std::vector<StepReport> steps;  // plan order
  std::string started_at;
  std::string finished_at;

  const StepReport* find(const Iri& step) const;
};

struct ExecutorOptions {
  // Longest time a step may take from Start to a final state.
  std::chrono::milliseconds step_timeout{60000};
  // Longest time to wait for an aborted step to settle.
  std::chrono::milliseconds abort_timeout{5000};
};

// Starts each step once all of its dependencies completed. The first step
// ending in anything but Completed fails the mission and aborts every step
// still running. `on_update` sees a snapshot after every recorded change.
// Throws SkillBusy when a skill of the plan is being driven by another
// execution.
ExecutionReport execute(const Plan& plan, SkillInvoker& invoker, const ExecutorOptions& options = {},
                        const std::function<void(const ExecutionReport&)>& on_update = {});

}  // namespace aurcap::planning
