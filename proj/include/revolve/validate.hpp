#pragma once

#include <algorithm>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "revolve/action.hpp"

namespace revolve {

struct Violation {
  std::size_t index = 0;  // position of the offending action
  std::string message;
};

struct ValidationReport {
  std::optional<Violation> violation;
  step_t advance_count = 0;
  step_t adjoint_count = 0;
  step_t peak_live_slots = 0;

  bool ok() const { return !violation.has_value(); }
};

/// Abstract interpreter for an action stream.
///
/// Tracks a symbolic current state index, the state index held by each
/// slot, and an adjoint cursor starting at `steps`. The stream must replay
/// the forward sweep consistently and run exactly one adjoint step for each
/// of steps-1, ..., 0 in that order, each at the state it needs, then end
/// with Terminate. Reports the first violation.
inline ValidationReport validate_schedule(std::span<const Action> actions, step_t steps,
                                          step_t snaps) {
  ValidationReport report;
  auto fail = [&](std::size_t i, std::string msg) {
    report.violation = Violation{i, std::move(msg)};
    return report;
  };
  if (steps < 1 || snaps < 1) {
    return fail(0, "invalid configuration: steps and snaps must be >= 1");
  }

  std::vector<std::optional<step_t>> slots(static_cast<std::size_t>(snaps));
  step_t state = 0;
  step_t cursor = steps;
  bool first_seen = false;
  bool terminated = false;

  auto live_slots = [&] {
    // A slot counts while it holds a state below the cursor that has not
    // been superseded.
    step_t n = 0;
    for (const auto& held : slots) {
      n += (held && *held < cursor) ? 1 : 0;
    }
    return n;
  };

  for (std::size_t i = 0; i < actions.size(); ++i) {
    const Action& a = actions[i];
    const auto at = std::to_string(state);
    if (terminated) {
      return fail(i, "action after terminate");
    }
    auto slot_ok = [&]() -> std::optional<std::string> {
      if (!a.check) {
        return std::string(to_string(a.kind)) + " without a slot index";
      }
      if (*a.check < 0 || *a.check >= snaps) {
        return "slot " + std::to_string(*a.check) + " out of range [0, " +
               std::to_string(snaps) + ")";
      }
      return std::nullopt;
    };
    switch (a.kind) {
      case ActionKind::Error:
        return fail(i, "error action in schedule");
      case ActionKind::Advance:
        if (a.old_capo != state) {
          return fail(i, "advance starts at " + std::to_string(a.old_capo) +
                             " but current state is " + at);
        }
        if (a.capo <= a.old_capo) {
          return fail(i, "advance does not move forward");
        }
        if (a.capo > steps) {
          return fail(i, "advance past the final state");
        }
        report.advance_count += a.capo - a.old_capo;
        state = a.capo;
        break;
      case ActionKind::Takeshot:
        if (auto bad = slot_ok()) {
          return fail(i, *bad);
        }
        if (a.capo != state) {
          return fail(i, "takeshot records " + std::to_string(a.capo) +
                             " but current state is " + at);
        }
        slots[static_cast<std::size_t>(*a.check)] = state;
        break;
      case ActionKind::Restore: {
        if (auto bad = slot_ok()) {
          return fail(i, *bad);
        }
        const auto& held = slots[static_cast<std::size_t>(*a.check)];
        if (!held) {
          return fail(i, "restore from never-written slot " + std::to_string(*a.check));
        }
        if (*held != a.capo) {
          return fail(i, "restore expects state " + std::to_string(a.capo) + " but slot " +
                             std::to_string(*a.check) + " holds " + std::to_string(*held));
        }
        state = *held;
        break;
      }
      case ActionKind::Firstrun:
        if (first_seen) {
          return fail(i, "duplicate first adjoint step");
        }
        if (cursor != steps) {
          return fail(i, "first adjoint step after other adjoint steps");
        }
        if (state != steps - 1 || a.capo != state) {
          return fail(i, "first adjoint step needs state " + std::to_string(steps - 1) +
                             " but current state is " + at);
        }
        first_seen = true;
        --cursor;
        ++report.adjoint_count;
        break;
      case ActionKind::Youturn:
        if (!first_seen) {
          return fail(i, "adjoint step before the first adjoint step");
        }
        if (cursor < 1 || state != cursor - 1 || a.capo != state) {
          return fail(i, "adjoint step needs state " + std::to_string(cursor - 1) +
                             " but current state is " + at);
        }
        --cursor;
        ++report.adjoint_count;
        break;
      case ActionKind::Terminate:
        if (cursor != 0) {
          return fail(i, "incomplete reversal: " + std::to_string(cursor) +
                             " adjoint steps missing");
        }
        terminated = true;
        break;
    }
    report.peak_live_slots = std::max(report.peak_live_slots, live_slots());
  }
  if (!terminated) {
    if (cursor != 0) {
      return fail(actions.size(), "incomplete reversal: " + std::to_string(cursor) +
                                      " adjoint steps missing");
    }
    return fail(actions.size(), "missing terminate");
  }
  return report;
}

}  // namespace revolve
