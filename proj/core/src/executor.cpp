#include "aurcap/planning/executor.hpp"

#include <spdlog/spdlog.h>

#include <condition_variable>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include "aurcap/error.hpp"

namespace aurcap::planning {

namespace {

using skill::SkillState;
using SteadyClock = std::chrono::steady_clock;

bool is_final(SkillState s) { return s == SkillState::Completed || s == SkillState::Stopped || s == SkillState::Aborted; }

// Skills currently driven by some execution in this process.
std::mutex busy_mutex;
std::set<Iri> busy_skills;

class SkillClaim {
 public:
  explicit SkillClaim(const Plan& plan) {
    std::lock_guard lock(busy_mutex);
    for (const auto& a : plan.assignments)
      if (busy_skills.count(a.skill) && !skills_.count(a.skill))
        throw Error(Errc::SkillBusy, a.skill.str() + " is in use by another mission");
    for (const auto& a : plan.assignments)
      if (busy_skills.insert(a.skill).second) skills_.insert(a.skill);
  }
  ~SkillClaim() {
    std::lock_guard lock(busy_mutex);
    for (const auto& s : skills_) busy_skills.erase(s);
  }
  SkillClaim(const SkillClaim&) = delete;
  SkillClaim& operator=(const SkillClaim&) = delete;

 private:
  std::set<Iri> skills_;
};

std::optional<SkillState> refused_in(const std::string& reason) {
  constexpr std::string_view prefix = "not permissible in ";
  if (reason.rfind(prefix, 0) != 0) return std::nullopt;
  return skill::state_from_string(std::string_view(reason).substr(prefix.size()));
}

enum class Phase { Waiting, Running, Done };

class Run {
 public:
  Run(const Plan& plan, SkillInvoker& invoker, const ExecutorOptions& options,
      const std::function<void(const ExecutionReport&)>& on_update)
      : plan_(plan), invoker_(invoker), options_(options), on_update_(on_update) {
    report_.mission = plan.mission;
    for (const auto& a : plan.assignments) {
      report_.steps.push_back({a.step, a.robot, a.capability, a.skill, false, std::nullopt, {}, {}});
      phase_.push_back(Phase::Waiting);
    }
  }

  ExecutionReport operator()() {
    std::unique_lock lock(mutex_);
    report_.status = MissionStatus::Running;
    report_.started_at = wire::rfc3339(skill::Clock::now());
    publish(lock);
    std::vector<std::thread> threads;
    std::set<std::size_t> aborted;
    while (true) {
      if (!failed_) {
        for (std::size_t i = 0; i < phase_.size(); ++i) {
          if (phase_[i] != Phase::Waiting || !ready(i)) continue;
          phase_[i] = Phase::Running;
          report_.steps[i].started = true;
          threads.emplace_back([this, i] { run_step(i); });
        }
      } else {
        // Fan the abort out to everything still running.
        std::vector<std::size_t> targets;
        for (std::size_t i = 0; i < phase_.size(); ++i)
          if (phase_[i] == Phase::Running && !aborted.count(i) && plan_.assignments[i].step != report_.failed_step)
            targets.push_back(i);
        if (!targets.empty()) {
          lock.unlock();
          for (const auto i : targets) send_abort(i);
          lock.lock();
          aborted.insert(targets.begin(), targets.end());
        }
      }
      const bool running = std::any_of(phase_.begin(), phase_.end(), [](Phase p) { return p == Phase::Running; });
      if (!running && (failed_ || !any_ready())) break;
      cv_.wait(lock);
    }
    lock.unlock();
    for (auto& t : threads) t.join();
    lock.lock();
    const bool all_completed = std::all_of(report_.steps.begin(), report_.steps.end(), [](const StepReport& s) {
      return s.terminal == SkillState::Completed;
    });
    report_.status = !failed_ && all_completed ? MissionStatus::Succeeded : MissionStatus::Failed;
    if (report_.status == MissionStatus::Failed && report_.reason.empty()) report_.reason = "not every step completed";
    report_.finished_at = wire::rfc3339(skill::Clock::now());
    publish(lock);
    return report_;
  }

 private:
  bool completed(const Iri& step) const {
    for (std::size_t i = 0; i < plan_.assignments.size(); ++i)
      if (plan_.assignments[i].step == step) return report_.steps[i].terminal == SkillState::Completed;
    return false;
  }

  bool ready(std::size_t i) const {
    const auto& a = plan_.assignments[i];
    for (const auto& d : a.depends_on)
      if (!completed(d)) return false;
    // Steps of this mission sharing a skill take turns.
    for (std::size_t j = 0; j < phase_.size(); ++j)
      if (j != i && phase_[j] == Phase::Running && plan_.assignments[j].skill == a.skill) return false;
    return true;
  }

  bool any_ready() const {
    for (std::size_t i = 0; i < phase_.size(); ++i)
      if (phase_[i] == Phase::Waiting && ready(i)) return true;
    return false;
  }

  void publish(std::unique_lock<std::mutex>&) {
    if (on_update_) on_update_(report_);
  }

  void record(std::size_t i, const wire::StateMessage& s) {
    std::unique_lock lock(mutex_);
    report_.steps[i].trajectory.push_back(s);
    publish(lock);
  }

  void finish(std::size_t i, std::optional<SkillState> terminal, const std::string& failure) {
    {
      std::unique_lock lock(mutex_);
      auto& step = report_.steps[i];
      step.terminal = terminal;
      step.failure = failure;
      phase_[i] = Phase::Done;
      if (terminal != SkillState::Completed && !failed_) {
        failed_ = true;
        report_.failed_step = step.step;
        report_.reason = failure.empty() ? "step ended in " + std::string(skill::to_string(*terminal)) : failure;
      }
      publish(lock);
    }
    cv_.notify_all();
  }

  std::unique_ptr<interfaces::RemoteInvocation> start(std::size_t i) {
    const auto& a = plan_.assignments[i];
    wire::CommandMessage cmd{wire::new_uuid(), skill::Command::Start, wire::from_parameters(a.parameters),
                             wire::rfc3339(skill::Clock::now())};
    try {
      return invoker_.invoke(a.interface, cmd);
    } catch (const Error& e) {
      const auto state = refused_in(e.detail());
      if (e.code() != Errc::Rejected || !state || !is_final(*state)) throw;
    }
    // Left over from an earlier run: reset, then start once more.
    auto reset = invoker_.invoke(a.interface, {wire::new_uuid(), skill::Command::Reset, {}, std::nullopt});
    reset->wait_for({SkillState::Idle}, options_.abort_timeout);
    cmd.correlation_id = wire::new_uuid();
    return invoker_.invoke(a.interface, cmd);
  }

  void run_step(std::size_t i) {
    const auto deadline = SteadyClock::now() + options_.step_timeout;
    std::unique_ptr<interfaces::RemoteInvocation> inv;
    try {
      inv = start(i);
    } catch (const Error& e) {
      if (e.code() == Errc::Timeout)
        return finish(i, std::nullopt, std::string(to_string(Errc::InterfaceTimeout)) + ": " + e.detail());
      return finish(i, std::nullopt, std::string(to_string(e.code())) + ": " + e.detail());
    }
    if (inv->prior()) record(i, *inv->prior());
    record(i, inv->initial());
    auto state = inv->initial().state;
    while (!is_final(state)) {
      const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - SteadyClock::now());
      auto next = left.count() > 0 ? inv->next(left) : std::nullopt;
      if (!next) break;
      record(i, *next);
      state = next->state;
    }
    if (!is_final(state))
      return finish(i, state, std::string(to_string(Errc::InterfaceTimeout)) + ": no final state from " +
                                  plan_.assignments[i].skill.str());
    std::string failure;
    if (state != SkillState::Completed) {
      std::lock_guard lock(mutex_);
      failure = failed_ ? "aborted after " + report_.failed_step->str() + " failed"
                        : "ended in " + std::string(skill::to_string(state));
    }
    finish(i, state, failure);
  }

  void send_abort(std::size_t i) {
    const auto& a = plan_.assignments[i];
    try {
      invoker_.invoke(a.interface, {wire::new_uuid(), skill::Command::Abort, {}, std::nullopt});
    } catch (const Error& e) {
      spdlog::warn("abort of {} failed: {}", a.skill.str(), e.what());
    }
  }

  const Plan& plan_;
  SkillInvoker& invoker_;
  const ExecutorOptions& options_;
  const std::function<void(const ExecutionReport&)>& on_update_;
  std::mutex mutex_;
  std::condition_variable cv_;
  ExecutionReport report_;
  std::vector<Phase> phase_;
  bool failed_ = false;
};

}  // namespace

std::string_view to_string(MissionStatus s) noexcept {
  switch (s) {
    case MissionStatus::Pending:
      return "Pending";
    case MissionStatus::Running:
      return "Running";
    case MissionStatus::Succeeded:
      return "Succeeded";
    case MissionStatus::Failed:
      return "Failed";
  }
  return "?";
}

const StepReport* ExecutionReport::find(const Iri& step) const {
  for (const auto& s : steps)
    if (s.step == step) return &s;
  return nullptr;
}

ExecutionReport execute(const Plan& plan, SkillInvoker& invoker, const ExecutorOptions& options,
                        const std::function<void(const ExecutionReport&)>& on_update) {
  SkillClaim claim(plan);
  Run run(plan, invoker, options, on_update);
  return run();
}

}  // namespace aurcap::planning
