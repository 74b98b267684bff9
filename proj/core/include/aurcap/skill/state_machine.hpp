#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace aurcap::skill {

enum class SkillState : std::uint8_t {
  Idle,
  Starting,
  Execute,
  Completing,
  Completed,
  Holding,
  Held,
  Unholding,
  Suspending,
  Suspended,
  Unsuspending,
  Stopping,
  Stopped,
  Aborting,
  Aborted,
  Resetting,
};

enum class Command : std::uint8_t { Start, Hold, Unhold, Suspend, Unsuspend, Stop, Abort, Reset };

inline constexpr std::array<SkillState, 16> kAllStates = {
    SkillState::Idle,      SkillState::Starting,     SkillState::Execute,  SkillState::Completing,
    SkillState::Completed, SkillState::Holding,      SkillState::Held,     SkillState::Unholding,
    SkillState::Suspending, SkillState::Suspended,   SkillState::Unsuspending, SkillState::Stopping,
    SkillState::Stopped,   SkillState::Aborting,     SkillState::Aborted,  SkillState::Resetting,
};

inline constexpr std::array<Command, 8> kAllCommands = {Command::Start,     Command::Hold,  Command::Unhold,
                                                        Command::Suspend,   Command::Unsuspend, Command::Stop,
                                                        Command::Abort,     Command::Reset};

std::string_view to_string(SkillState s) noexcept;
std::optional<SkillState> state_from_string(std::string_view text) noexcept;
// Lowercase wire names: "start", "hold", ...
std::string_view to_string(Command c) noexcept;
std::optional<Command> command_from_string(std::string_view text) noexcept;

bool is_waiting(SkillState s) noexcept;
inline bool is_acting(SkillState s) noexcept { return !is_waiting(s); }

// Direct successor of a command edge, if the table has one.
std::optional<SkillState> command_target(SkillState from, Command c) noexcept;
// Completion edge of an acting state. Execute has none: it completes only
// when the behavior body returns.
std::optional<SkillState> automatic_successor(SkillState from) noexcept;

// Table-driven machine without threads or behavior. Automatic edges fire as
// part of the call that entered the acting state.
class Isa88Machine {
 public:
  SkillState state() const noexcept { return state_; }
  bool body_finished() const noexcept { return body_finished_; }

  // Visited states, starting with the command's direct target; nullopt when
  // the command is not permissible.
  std::optional<std::vector<SkillState>> apply(Command c);
  // Behavior returned. Moves Execute to Completing and Completed; in Held or
  // Suspended the completion is deferred until Execute is re-entered.
  std::vector<SkillState> finish_body();

 private:
  void settle(std::vector<SkillState>& trail);

  SkillState state_ = SkillState::Idle;
  bool body_finished_ = false;
};

}  // namespace aurcap::skill
