#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "aurcap/ontology/knowledge_base.hpp"
#include "aurcap/skill/state_machine.hpp"

namespace aurcap::skill {

using Clock = std::chrono::system_clock;

// One start parameter: a value for a type description attached to the skill.
struct Parameter {
  Iri type_description;
  Literal value;
  friend bool operator==(const Parameter&, const Parameter&) = default;
};

struct StateChange {
  Iri skill;
  SkillState state = SkillState::Idle;
  std::optional<std::string> correlation_id;
  std::uint64_t sequence = 0;
  Clock::time_point at;
  std::string detail;  // failure detail on the abort path
};

// Handed to the behavior body. Interruption is cooperative: bodies call
// checkpoint() (or sleep_for) between units of work.
class ExecutionContext {
 public:
  virtual ~ExecutionContext() = default;
  virtual const Iri& skill() const = 0;
  virtual const std::vector<Parameter>& parameters() const = 0;
  std::optional<Literal> parameter(const Iri& type_description) const;
  // Blocks while the skill is held or suspended. Returns false once the body
  // should give up (stopped, aborted).
  virtual bool checkpoint() = 0;
  // Sleeps for the given time of Execute; time spent held or suspended does
  // not count. Returns false when interrupted by stop or abort.
  virtual bool sleep_for(std::chrono::milliseconds duration) = 0;
};

using Behavior = std::function<void(ExecutionContext&)>;

struct SkillSpec {
  Iri id;
  Iri capability;
  Iri host;
  Behavior behavior;  // empty: completes immediately
  // Type descriptions accepted as start parameters; a data element is
  // created for each.
  std::vector<Iri> parameters;
};

struct CommandResult {
  bool accepted = false;
  bool duplicate = false;  // correlation id seen before; result replayed
  std::string reason;
  // The command's direct target when accepted, the unchanged current state
  // when rejected.
  StateChange change;
};

// Bounded queue of state changes for one observer. Drops the oldest entry
// beyond the capacity.
class StateStream {
 public:
  explicit StateStream(std::size_t capacity = 1024) : capacity_(capacity) {}

  std::optional<StateChange> next(std::chrono::milliseconds timeout);
  std::optional<StateChange> try_next();
  void close();
  bool closed() const;
  std::size_t dropped() const;

  void push(const StateChange& change);

 private:
  mutable std::mutex mutex_;
  std::condition_variable cv_;
  std::deque<StateChange> queue_;
  std::size_t capacity_;
  std::size_t dropped_ = 0;
  bool closed_ = false;
};

struct SkillInfo {
  Iri id;
  Iri capability;
  Iri host;
  std::map<Iri, Datatype> parameter_types;
};

// Hosts skills and drives their state machines. Commands for one skill are
// applied one at a time; bodies run on their own threads.
class SkillRuntime {
 public:
  SkillRuntime();
  ~SkillRuntime();
  SkillRuntime(const SkillRuntime&) = delete;
  SkillRuntime& operator=(const SkillRuntime&) = delete;

  // Writes the skill individual, its isRealizedBy and hostedOn links.
  // Start parameters are checked against the data elements the skill owns at
  // registration time. Throws UnknownCapability, CapabilityNotProvidedByHost,
  // DuplicateId.
  Iri register_skill(KnowledgeBase& kb, SkillSpec spec);

  bool has(const Iri& skill) const;
  std::vector<Iri> skills() const;
  SkillInfo info(const Iri& skill) const;

  // Throws UnknownSkill. Parameter errors are rejections, not exceptions.
  CommandResult command(const Iri& skill, Command cmd, const std::vector<Parameter>& parameters = {},
                        const std::string& correlation_id = {});
  StateChange current(const Iri& skill) const;
  // Starts with the current state.
  std::shared_ptr<StateStream> observe(const Iri& skill);
  // Waits until the state is one of `states`.
  bool wait_for(const Iri& skill, std::initializer_list<SkillState> states, std::chrono::milliseconds timeout) const;
  std::string last_failure(const Iri& skill) const;

  struct Slot;

 private:
  Slot& slot(const Iri& skill) const;

  mutable std::mutex mutex_;
  std::map<Iri, std::shared_ptr<Slot>> slots_;
};

}  // namespace aurcap::skill
