#pragma once

#include <optional>
#include <string_view>

#include "revolve/error.hpp"

namespace revolve {

enum class ActionKind { Advance, Takeshot, Restore, Firstrun, Youturn, Terminate, Error };

inline constexpr std::string_view to_string(ActionKind kind) {
  switch (kind) {
    case ActionKind::Advance: return "advance";
    case ActionKind::Takeshot: return "takeshot";
    case ActionKind::Restore: return "restore";
    case ActionKind::Firstrun: return "firstrun";
    case ActionKind::Youturn: return "youturn";
    case ActionKind::Terminate: return "terminate";
    case ActionKind::Error: return "error";
  }
  return "error";
}

inline std::optional<ActionKind> parse_action_kind(std::string_view name) {
  for (auto kind : {ActionKind::Advance, ActionKind::Takeshot, ActionKind::Restore,
                    ActionKind::Firstrun, ActionKind::Youturn, ActionKind::Terminate,
                    ActionKind::Error}) {
    if (to_string(kind) == name) {
      return kind;
    }
  }
  return std::nullopt;
}

/// One scheduler decision.
///
/// State i is the state before forward step i; step i maps state i to
/// i + 1 and its adjoint needs state i. `old_capo` is the state held before
/// the action and `capo` the state held after it. For Firstrun/Youturn both
/// equal the step whose adjoint runs. `check` is set for Takeshot/Restore.
struct Action {
  ActionKind kind = ActionKind::Error;
  step_t old_capo = 0;
  step_t capo = 0;
  std::optional<step_t> check;

  bool operator==(const Action&) const = default;

  static Action advance(step_t from, step_t to) { return {ActionKind::Advance, from, to, {}}; }
  static Action takeshot(step_t at, step_t slot) { return {ActionKind::Takeshot, at, at, slot}; }
  static Action restore(step_t from, step_t to, step_t slot) {
    return {ActionKind::Restore, from, to, slot};
  }
  static Action firstrun(step_t at) { return {ActionKind::Firstrun, at, at, {}}; }
  static Action youturn(step_t at) { return {ActionKind::Youturn, at, at, {}}; }
  static Action terminate(step_t at) { return {ActionKind::Terminate, at, at, {}}; }
  static Action error(step_t at) { return {ActionKind::Error, at, at, {}}; }

  bool is_adjoint() const { return kind == ActionKind::Firstrun || kind == ActionKind::Youturn; }
};

}  // namespace revolve
