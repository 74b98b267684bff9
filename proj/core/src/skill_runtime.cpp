#include <algorithm>
#include <atomic>
#include <thread>

#include <spdlog/spdlog.h>

#include "aurcap/capability.hpp"
#include "aurcap/error.hpp"
#include "aurcap/ontology/namespaces.hpp"
#include "aurcap/property.hpp"
#include "aurcap/skill/runtime.hpp"

namespace aurcap::skill {

namespace {
constexpr std::size_t kRememberedCorrelations = 4096;
}

std::optional<Literal> ExecutionContext::parameter(const Iri& type_description) const {
  for (const auto& p : parameters())
    if (p.type_description == type_description) return p.value;
  return std::nullopt;
}

void StateStream::push(const StateChange& change) {
  {
    std::lock_guard lock(mutex_);
    if (closed_) return;
    if (queue_.size() >= capacity_) {
      queue_.pop_front();
      ++dropped_;
      if (dropped_ == 1 || dropped_ % capacity_ == 0)
        spdlog::warn("state stream for {} full; {} oldest entries dropped", change.skill.str(), dropped_);
    }
    queue_.push_back(change);
  }
  cv_.notify_all();
}

std::optional<StateChange> StateStream::next(std::chrono::milliseconds timeout) {
  std::unique_lock lock(mutex_);
  cv_.wait_for(lock, timeout, [&] { return !queue_.empty() || closed_; });
  if (queue_.empty()) return std::nullopt;
  auto out = std::move(queue_.front());
  queue_.pop_front();
  return out;
}

std::optional<StateChange> StateStream::try_next() { return next(std::chrono::milliseconds(0)); }

void StateStream::close() {
  {
    std::lock_guard lock(mutex_);
    closed_ = true;
  }
  cv_.notify_all();
}

bool StateStream::closed() const {
  std::lock_guard lock(mutex_);
  return closed_;
}

std::size_t StateStream::dropped() const {
  std::lock_guard lock(mutex_);
  return dropped_;
}

struct SkillRuntime::Slot {
  SkillInfo info;
  Behavior behavior;

  mutable std::mutex m;
  mutable std::condition_variable cv;
  Isa88Machine machine;
  std::uint64_t sequence = 0;
  StateChange last;
  std::vector<std::weak_ptr<StateStream>> observers;
  std::map<std::string, CommandResult> seen;
  std::deque<std::string> seen_order;

  std::uint64_t generation = 0;  // bumped on start, stop, abort and shutdown
  std::optional<std::string> start_correlation;
  std::vector<Parameter> parameters;
  std::string failure;
  bool shutting_down = false;

  struct Worker {
    std::thread thread;
    std::shared_ptr<std::atomic<bool>> done;
  };
  std::vector<Worker> workers;

  // callers hold m
  StateChange emit(SkillState state, const std::optional<std::string>& correlation, const std::string& detail = {}) {
    last = StateChange{info.id, state, correlation, ++sequence, Clock::now(), detail};
    std::erase_if(observers, [](const auto& w) { return w.expired(); });
    for (const auto& w : observers)
      if (auto s = w.lock()) s->push(last);
    cv.notify_all();
    return last;
  }

  bool cancelled(std::uint64_t gen) const { return gen != generation || shutting_down; }

  void reap_workers() {
    for (auto it = workers.begin(); it != workers.end();) {
      if (it->done->load()) {
        it->thread.join();
        it = workers.erase(it);
      } else {
        ++it;
      }
    }
  }

  void launch(std::shared_ptr<Slot> self);
};

namespace {

class BodyContext final : public ExecutionContext {
 public:
  BodyContext(std::shared_ptr<SkillRuntime::Slot> slot, std::uint64_t gen, std::vector<Parameter> params)
      : slot_(std::move(slot)), gen_(gen), params_(std::move(params)) {}

  const Iri& skill() const override { return slot_->info.id; }
  const std::vector<Parameter>& parameters() const override { return params_; }

  bool checkpoint() override {
    std::unique_lock lock(slot_->m);
    return runnable(lock);
  }

  bool sleep_for(std::chrono::milliseconds duration) override {
    using steady = std::chrono::steady_clock;
    std::unique_lock lock(slot_->m);
    auto remaining = std::chrono::duration_cast<steady::duration>(duration);
    while (true) {
      if (!runnable(lock)) return false;
      if (remaining <= steady::duration::zero()) return true;
      const auto start = steady::now();
      slot_->cv.wait_for(lock, remaining,
                         [&] { return slot_->cancelled(gen_) || slot_->machine.state() != SkillState::Execute; });
      remaining -= steady::now() - start;
    }
  }

 private:
  // Blocks while paused; true when the body may continue.
  bool runnable(std::unique_lock<std::mutex>& lock) {
    while (true) {
      if (slot_->cancelled(gen_)) return false;
      switch (slot_->machine.state()) {
        case SkillState::Execute: return true;
        case SkillState::Holding:
        case SkillState::Held:
        case SkillState::Unholding:
        case SkillState::Suspending:
        case SkillState::Suspended:
        case SkillState::Unsuspending:
          slot_->cv.wait(lock);
          break;
        default: return false;
      }
    }
  }

  std::shared_ptr<SkillRuntime::Slot> slot_;
  std::uint64_t gen_;
  std::vector<Parameter> params_;
};

}  // namespace

void SkillRuntime::Slot::launch(std::shared_ptr<Slot> self) {
  reap_workers();
  auto done = std::make_shared<std::atomic<bool>>(false);
  const auto gen = generation;
  std::thread t([self = std::move(self), gen, params = parameters, done] {
    BodyContext ctx(self, gen, params);
    std::optional<std::string> failure;
    try {
      self->behavior(ctx);
    } catch (const std::exception& e) {
      failure = e.what();
    } catch (...) {
      failure = "behavior raised a non-standard exception";
    }
    {
      std::lock_guard lock(self->m);
      if (!self->cancelled(gen)) {
        if (failure) {
          spdlog::warn("skill {} behavior failed: {}", self->info.id.str(), *failure);
          self->failure = *failure;
          ++self->generation;
          if (auto trail = self->machine.apply(Command::Abort))
            for (auto s : *trail) self->emit(s, self->start_correlation, *failure);
        } else {
          for (auto s : self->machine.finish_body()) self->emit(s, self->start_correlation);
        }
      }
    }
    done->store(true);
  });
  workers.push_back({std::move(t), std::move(done)});
}

SkillRuntime::SkillRuntime() = default;

SkillRuntime::~SkillRuntime() {
  std::map<Iri, std::shared_ptr<Slot>> slots;
  {
    std::lock_guard lock(mutex_);
    slots.swap(slots_);
  }
  for (auto& [id, s] : slots) {
    std::vector<Slot::Worker> workers;
    {
      std::lock_guard lock(s->m);
      s->shutting_down = true;
      ++s->generation;
      workers.swap(s->workers);
      for (const auto& w : s->observers)
        if (auto stream = w.lock()) stream->close();
      s->cv.notify_all();
    }
    for (auto& w : workers) w.thread.join();
  }
}

Iri SkillRuntime::register_skill(KnowledgeBase& kb, SkillSpec spec) {
  if (spec.id.empty()) throw Error(Errc::InvalidIri, "skill without id");
  {
    std::lock_guard lock(mutex_);
    if (slots_.contains(spec.id)) throw Error(Errc::DuplicateId, spec.id.str());
  }
  if (!capability::is_capability(kb, spec.capability)) throw Error(Errc::UnknownCapability, spec.capability.str());
  if (!kb.contains(ObjectLink{spec.host, vocab::providesCapability, spec.capability}))
    throw Error(Errc::CapabilityNotProvidedByHost,
                spec.host.str() + " does not provide " + spec.capability.str());
  for (const auto& other : kb.subjects(vocab::isRealizedBy, spec.id))
    if (other != spec.capability)
      throw Error(Errc::DuplicateId, spec.id.str() + " already realizes " + other.str());

  for (const auto& td : spec.parameters)
    if (!property::type_description(kb, td)) throw Error(Errc::UnknownTypeDescription, td.str());

  kb.add_type(spec.id, vocab::Skill);
  kb.add_link(spec.capability, vocab::isRealizedBy, spec.id);
  kb.add_link(spec.id, vocab::hostedOn, spec.host);

  for (const auto& td : spec.parameters) property::ensure_data_element(kb, spec.id, td);

  auto slot = std::make_shared<Slot>();
  slot->info = SkillInfo{spec.id, spec.capability, spec.host, {}};
  for (const auto& de : property::data_elements_of(kb, spec.id))
    if (auto td = property::type_description(kb, de.type_description))
      slot->info.parameter_types[td->id] = td->datatype;
  slot->behavior = std::move(spec.behavior);
  slot->last = StateChange{spec.id, SkillState::Idle, std::nullopt, 0, Clock::now(), {}};

  std::lock_guard lock(mutex_);
  if (!slots_.emplace(spec.id, std::move(slot)).second) throw Error(Errc::DuplicateId, spec.id.str());
  return spec.id;
}

SkillRuntime::Slot& SkillRuntime::slot(const Iri& skill) const {
  std::lock_guard lock(mutex_);
  auto it = slots_.find(skill);
  if (it == slots_.end()) throw Error(Errc::UnknownSkill, skill.str());
  return *it->second;
}

bool SkillRuntime::has(const Iri& skill) const {
  std::lock_guard lock(mutex_);
  return slots_.contains(skill);
}

std::vector<Iri> SkillRuntime::skills() const {
  std::lock_guard lock(mutex_);
  std::vector<Iri> out;
  for (const auto& [id, s] : slots_) out.push_back(id);
  return out;
}

SkillInfo SkillRuntime::info(const Iri& skill) const { return slot(skill).info; }

CommandResult SkillRuntime::command(const Iri& skill, Command cmd, const std::vector<Parameter>& parameters,
                                    const std::string& correlation_id) {
  std::shared_ptr<Slot> owner;
  {
    std::lock_guard lock(mutex_);
    auto it = slots_.find(skill);
    if (it == slots_.end()) throw Error(Errc::UnknownSkill, skill.str());
    owner = it->second;
  }
  Slot& s = *owner;
  std::lock_guard lock(s.m);
  if (!correlation_id.empty()) {
    if (auto it = s.seen.find(correlation_id); it != s.seen.end()) {
      auto replay = it->second;
      replay.duplicate = true;
      return replay;
    }
  }
  const std::optional<std::string> correlation =
      correlation_id.empty() ? std::nullopt : std::optional<std::string>(correlation_id);

  CommandResult result;
  auto reject = [&](std::string reason) {
    result.accepted = false;
    result.reason = std::move(reason);
    result.change = s.last;
  };

  std::vector<Parameter> checked;
  if (!parameters.empty() && cmd != Command::Start) {
    reject("parameters are only accepted with start");
  } else {
    for (const auto& p : parameters) {
      auto it = s.info.parameter_types.find(p.type_description);
      if (it == s.info.parameter_types.end()) {
        reject("unknown parameter " + p.type_description.str());
        break;
      }
      Literal v = p.value;
      if (it->second == Datatype::Decimal && v.datatype() == Datatype::Integer) v = Literal(Datatype::Decimal, v.lexical());
      if (v.datatype() != it->second) {
        reject("parameter " + p.type_description.str() + " expects " + std::string(to_string(it->second)));
        break;
      }
      checked.push_back({p.type_description, std::move(v)});
    }
  }

  if (result.reason.empty()) {
    const auto before = s.machine.state();
    auto trail = s.machine.apply(cmd);
    if (!trail) {
      reject("not permissible in " + std::string(to_string(before)));
    } else {
      result.accepted = true;
      if (cmd == Command::Start) {
        ++s.generation;
        s.start_correlation = correlation;
        s.parameters = std::move(checked);
        s.failure.clear();
      } else if (cmd == Command::Stop || cmd == Command::Abort) {
        ++s.generation;
      }
      result.change = s.emit(trail->front(), correlation);
      for (std::size_t i = 1; i < trail->size(); ++i) s.emit((*trail)[i], correlation);
      if (cmd == Command::Start && s.machine.state() == SkillState::Execute) {
        if (s.behavior) {
          s.launch(owner);
        } else {
          for (auto st : s.machine.finish_body()) s.emit(st, correlation);
        }
      }
    }
  }

  if (!correlation_id.empty()) {
    s.seen.emplace(correlation_id, result);
    s.seen_order.push_back(correlation_id);
    if (s.seen_order.size() > kRememberedCorrelations) {
      s.seen.erase(s.seen_order.front());
      s.seen_order.pop_front();
    }
  }
  return result;
}

StateChange SkillRuntime::current(const Iri& skill) const {
  Slot& s = slot(skill);
  std::lock_guard lock(s.m);
  return s.last;
}

std::shared_ptr<StateStream> SkillRuntime::observe(const Iri& skill) {
  Slot& s = slot(skill);
  auto stream = std::make_shared<StateStream>();
  std::lock_guard lock(s.m);
  stream->push(s.last);
  s.observers.push_back(stream);
  return stream;
}

bool SkillRuntime::wait_for(const Iri& skill, std::initializer_list<SkillState> states,
                            std::chrono::milliseconds timeout) const {
  Slot& s = slot(skill);
  std::unique_lock lock(s.m);
  return s.cv.wait_for(lock, timeout, [&] {
    return std::find(states.begin(), states.end(), s.machine.state()) != states.end();
  });
}

std::string SkillRuntime::last_failure(const Iri& skill) const {
  Slot& s = slot(skill);
  std::lock_guard lock(s.m);
  return s.failure;
}

}  // namespace aurcap::skill
