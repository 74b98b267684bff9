#include "aurcap/skill/state_machine.hpp"

namespace aurcap::skill {

namespace {

constexpr std::array<std::string_view, 16> kStateNames = {
    "Idle",       "Starting",  "Execute",      "Completing", "Completed", "Holding", "Held",    "Unholding",
    "Suspending", "Suspended", "Unsuspending", "Stopping",   "Stopped",   "Aborting", "Aborted", "Resetting",
};
constexpr std::array<std::string_view, 8> kCommandNames = {"start", "hold",  "unhold", "suspend",
                                                           "unsuspend", "stop", "abort",  "reset"};

}  // namespace

std::string_view to_string(SkillState s) noexcept { return kStateNames[static_cast<std::size_t>(s)]; }

std::optional<SkillState> state_from_string(std::string_view text) noexcept {
  for (std::size_t i = 0; i < kStateNames.size(); ++i)
    if (kStateNames[i] == text) return static_cast<SkillState>(i);
  return std::nullopt;
}

std::string_view to_string(Command c) noexcept { return kCommandNames[static_cast<std::size_t>(c)]; }

std::optional<Command> command_from_string(std::string_view text) noexcept {
  for (std::size_t i = 0; i < kCommandNames.size(); ++i)
    if (kCommandNames[i] == text) return static_cast<Command>(i);
  return std::nullopt;
}

bool is_waiting(SkillState s) noexcept {
  switch (s) {
    case SkillState::Idle:
    case SkillState::Completed:
    case SkillState::Held:
    case SkillState::Suspended:
    case SkillState::Stopped:
    case SkillState::Aborted:
      return true;
    default:
      return false;
  }
}

std::optional<SkillState> command_target(SkillState from, Command c) noexcept {
  using S = SkillState;
  switch (c) {
    case Command::Start:
      if (from == S::Idle) return S::Starting;
      break;
    case Command::Hold:
      if (from == S::Execute) return S::Holding;
      break;
    case Command::Unhold:
      if (from == S::Held) return S::Unholding;
      break;
    case Command::Suspend:
      if (from == S::Execute) return S::Suspending;
      break;
    case Command::Unsuspend:
      if (from == S::Suspended) return S::Unsuspending;
      break;
    case Command::Stop:
      if (from != S::Aborting && from != S::Aborted && from != S::Stopping && from != S::Stopped) return S::Stopping;
      break;
    case Command::Abort:
      if (from != S::Aborting && from != S::Aborted) return S::Aborting;
      break;
    case Command::Reset:
      if (from == S::Completed || from == S::Stopped || from == S::Aborted) return S::Resetting;
      break;
  }
  return std::nullopt;
}

std::optional<SkillState> automatic_successor(SkillState from) noexcept {
  using S = SkillState;
  switch (from) {
    case S::Starting: return S::Execute;
    case S::Completing: return S::Completed;
    case S::Holding: return S::Held;
    case S::Unholding: return S::Execute;
    case S::Suspending: return S::Suspended;
    case S::Unsuspending: return S::Execute;
    case S::Stopping: return S::Stopped;
    case S::Aborting: return S::Aborted;
    case S::Resetting: return S::Idle;
    default: return std::nullopt;
  }
}

void Isa88Machine::settle(std::vector<SkillState>& trail) {
  while (true) {
    if (state_ == SkillState::Execute) {
      if (!body_finished_) return;
      state_ = SkillState::Completing;
    } else if (auto next = automatic_successor(state_)) {
      state_ = *next;
    } else {
      return;
    }
    trail.push_back(state_);
  }
}

std::optional<std::vector<SkillState>> Isa88Machine::apply(Command c) {
  const auto target = command_target(state_, c);
  if (!target) return std::nullopt;
  if (c == Command::Start) body_finished_ = false;
  state_ = *target;
  std::vector<SkillState> trail{state_};
  settle(trail);
  return trail;
}

std::vector<SkillState> Isa88Machine::finish_body() {
  std::vector<SkillState> trail;
  body_finished_ = true;
  settle(trail);
  return trail;
}

}  // namespace aurcap::skill
