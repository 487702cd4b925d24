#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "revolve/action.hpp"
#include "revolve/cost.hpp"
#include "revolve/error.hpp"

namespace revolve {

namespace detail {

/// Offline binomial reversal of `steps` steps with `snaps` slots.
///
/// Slots form a stack: slot 0 holds state 0, a takeshot pushes the current
/// state, and an adjoint step at the state stored on top pops it. Every
/// advance places the next checkpoint at the leftmost optimal split, so the
/// advance total equals min_advances(steps, snaps).
class BinomialMachine {
 public:
  BinomialMachine(step_t steps, step_t snaps)
      : fine_(steps), snaps_(snaps), slot_steps_(static_cast<std::size_t>(snaps), -1) {}

  Action next() {
    if (done_) {
      return Action::error(capo_);
    }
    if (!started_) {
      // The initial state is always checkpointed first.
      started_ = true;
      check_ = 0;
      slot(0) = capo_;
      return Action::takeshot(capo_, 0);
    }
    const step_t remaining = fine_ - capo_;
    if (remaining < 0) {
      return fail();
    }
    if (remaining == 0) {
      if (check_ < 0) {
        if (fine_ != 0) {
          return fail();
        }
        done_ = true;
        return Action::terminate(capo_);
      }
      const step_t from = capo_;
      capo_ = slot(check_);
      oldcapo_ = capo_;
      return Action::restore(from, capo_, check_);
    }
    if (remaining == 1) {
      const step_t at = capo_;
      fine_ -= 1;
      oldcapo_ = capo_;
      if (check_ >= 0 && slot(check_) == capo_) {
        --check_;
      }
      if (!adjoint_started_) {
        adjoint_started_ = true;
        return Action::firstrun(at);
      }
      return Action::youturn(at);
    }
    if (check_ < 0) {
      return fail();
    }
    if (slot(check_) != capo_) {
      if (check_ + 1 >= snaps_) {
        return fail();
      }
      ++check_;
      slot(check_) = capo_;
      oldcapo_ = capo_;
      return Action::takeshot(capo_, check_);
    }
    oldcapo_ = capo_;
    capo_ += optimal_split(remaining, snaps_ - check_);
    return Action::advance(oldcapo_, capo_);
  }

  step_t capo() const { return capo_; }
  step_t oldcapo() const { return oldcapo_; }
  step_t check() const { return check_; }
  bool done() const { return done_; }
  bool slot_live(step_t i) const { return i >= 0 && i <= check_; }

 private:
  step_t& slot(step_t i) { return slot_steps_[static_cast<std::size_t>(i)]; }

  Action fail() {
    done_ = true;
    return Action::error(capo_);
  }

  step_t fine_;
  step_t snaps_;
  step_t capo_ = 0;
  step_t oldcapo_ = 0;
  step_t check_ = -1;
  bool started_ = false;
  bool adjoint_started_ = false;
  bool done_ = false;
  std::vector<step_t> slot_steps_;
};

}  // namespace detail

/// The checkpoint scheduler. Call next_action() until Terminate.
///
/// With a step count the schedule is the optimal binomial one. Without
/// one (online mode) the forward sweep uses stride-doubling eviction: slots
/// fill at stride 1, and when they are full the stride doubles and every
/// checkpoint whose step is not a multiple of it is dropped (step 0 always
/// survives). finish_forward() then freezes the step count and the reverse
/// sweep walks the surviving segments backwards, reversing each with an
/// offline binomial schedule over the slots that are free at that point.
/// This is a heuristic, not an optimal online schedule.
class Controller {
 public:
  Controller(std::optional<step_t> steps, step_t snaps) : steps_(steps), snaps_(snaps) {
    if (snaps < 1) {
      throw ConfigError("controller: snaps must be >= 1, got " + std::to_string(snaps));
    }
    if (steps) {
      if (*steps < 1) {
        throw ConfigError("controller: steps must be >= 1, got " + std::to_string(*steps));
      }
      offline_.emplace(*steps, snaps);
      phase_ = Phase::Offline;
    } else {
      online_slots_.assign(static_cast<std::size_t>(snaps), -1);
      phase_ = Phase::OnlineForward;
    }
  }

  Action next_action() {
    switch (phase_) {
      case Phase::Offline: {
        Action a = offline_->next();
        capo_ = offline_->capo();
        oldcapo_ = offline_->oldcapo();
        check_ = offline_->check();
        if (a.kind == ActionKind::Terminate || a.kind == ActionKind::Error) {
          phase_ = Phase::Done;
        }
        return a;
      }
      case Phase::OnlineForward:
        return online_forward();
      case Phase::OnlineReverse:
        return online_reverse();
      case Phase::Done:
        break;
    }
    return Action::error(capo_);
  }

  /// Online mode only: the forward sweep is over, the current state index is
  /// the step count.
  void finish_forward() {
    if (phase_ != Phase::OnlineForward) {
      throw ProtocolError("finish_forward: controller is not in the online forward phase");
    }
    if (capo_ < 1) {
      throw ProtocolError("finish_forward: no forward step was taken");
    }
    steps_ = capo_;
    segments_.clear();
    for (step_t i = 0; i < snaps_; ++i) {
      if (online_slots_[static_cast<std::size_t>(i)] >= 0) {
        segments_.emplace_back(online_slots_[static_cast<std::size_t>(i)], i);
      }
    }
    std::sort(segments_.begin(), segments_.end());
    segment_ = static_cast<step_t>(segments_.size()) - 1;
    phase_ = Phase::OnlineReverse;
  }

  bool online() const { return !offline_.has_value(); }
  std::optional<step_t> steps() const { return steps_; }
  step_t snaps() const { return snaps_; }
  step_t capo() const { return capo_; }
  step_t oldcapo() const { return oldcapo_; }
  step_t check() const { return check_; }
  bool terminated() const { return phase_ == Phase::Done; }

  /// Whether slot i holds a state the schedule still needs.
  bool slot_live(step_t i) const {
    if (i < 0 || i >= snaps_) {
      return false;
    }
    switch (phase_) {
      case Phase::Offline:
        return offline_->slot_live(i);
      case Phase::OnlineForward:
        return online_slots_[static_cast<std::size_t>(i)] >= 0;
      case Phase::OnlineReverse:
        for (step_t j = 0; j <= segment_; ++j) {
          if (segments_[static_cast<std::size_t>(j)].second == i) {
            return true;
          }
        }
        if (sub_) {
          for (std::size_t k = 1; k < sub_slots_.size(); ++k) {
            if (sub_slots_[k] == i && sub_->slot_live(static_cast<step_t>(k))) {
              return true;
            }
          }
        }
        return false;
      case Phase::Done:
        break;
    }
    return false;
  }

  step_t live_slots() const {
    step_t n = 0;
    for (step_t i = 0; i < snaps_; ++i) {
      n += slot_live(i) ? 1 : 0;
    }
    return n;
  }

  /// Online mode: step indices currently held, in slot order (-1 = free).
  const std::vector<step_t>& online_slots() const { return online_slots_; }

 private:
  enum class Phase { Offline, OnlineForward, OnlineReverse, Done };

  Action online_forward() {
    if (wants_checkpoint(capo_)) {
      const auto free = std::find(online_slots_.begin(), online_slots_.end(), step_t{-1});
      *free = capo_;
      check_ = static_cast<step_t>(free - online_slots_.begin());
      shot_at_ = capo_;
      oldcapo_ = capo_;
      return Action::takeshot(capo_, check_);
    }
    oldcapo_ = capo_;
    capo_ += 1;
    return Action::advance(oldcapo_, capo_);
  }

  // Called once per forward state; may evict.
  bool wants_checkpoint(step_t t) {
    if (shot_at_ == t || t % stride_ != 0) {
      return false;
    }
    const auto full = [&] {
      return std::find(online_slots_.begin(), online_slots_.end(), step_t{-1}) ==
             online_slots_.end();
    };
    if (full()) {
      stride_ *= 2;
      for (auto& held : online_slots_) {
        if (held % stride_ != 0) {
          held = -1;
        }
      }
      if (full() || t % stride_ != 0) {
        return false;
      }
    }
    return true;
  }

  Action online_reverse() {
    for (;;) {
      if (!sub_) {
        if (segment_ < 0) {
          phase_ = Phase::Done;
          return Action::terminate(capo_);
        }
        const auto [base, base_slot] = segments_[static_cast<std::size_t>(segment_)];
        const step_t end = segment_ + 1 < static_cast<step_t>(segments_.size())
                               ? segments_[static_cast<std::size_t>(segment_ + 1)].first
                               : *steps_;
        sub_slots_.assign(1, base_slot);
        for (step_t i = 0; i < snaps_; ++i) {
          bool held = false;
          for (step_t j = 0; j <= segment_; ++j) {
            held = held || segments_[static_cast<std::size_t>(j)].second == i;
          }
          if (!held) {
            sub_slots_.push_back(i);
          }
        }
        sub_.emplace(end - base, static_cast<step_t>(sub_slots_.size()));
        sub_base_ = base;
        const step_t from = capo_;
        capo_ = base;
        oldcapo_ = base;
        check_ = base_slot;
        return Action::restore(from, base, base_slot);
      }

      const Action a = sub_->next();
      const auto map_slot = [&](const Action& x) {
        return sub_slots_[static_cast<std::size_t>(*x.check)];
      };
      switch (a.kind) {
        case ActionKind::Takeshot:
          if (*a.check == 0) {
            continue;  // the segment base already sits in its slot
          }
          check_ = map_slot(a);
          oldcapo_ = capo_;
          return Action::takeshot(capo_, check_);
        case ActionKind::Restore: {
          const step_t from = capo_;
          capo_ = a.capo + sub_base_;
          oldcapo_ = capo_;
          check_ = map_slot(a);
          return Action::restore(from, capo_, check_);
        }
        case ActionKind::Advance:
          oldcapo_ = a.old_capo + sub_base_;
          capo_ = a.capo + sub_base_;
          return Action::advance(oldcapo_, capo_);
        case ActionKind::Firstrun:
        case ActionKind::Youturn: {
          const step_t at = a.capo + sub_base_;
          oldcapo_ = capo_;
          if (!adjoint_started_) {
            adjoint_started_ = true;
            return Action::firstrun(at);
          }
          return Action::youturn(at);
        }
        case ActionKind::Terminate:
          online_slots_[static_cast<std::size_t>(
              segments_[static_cast<std::size_t>(segment_)].second)] = -1;
          sub_.reset();
          --segment_;
          continue;
        case ActionKind::Error:
          break;
      }
      phase_ = Phase::Done;
      return Action::error(capo_);
    }
  }

  std::optional<step_t> steps_;
  step_t snaps_;
  Phase phase_ = Phase::Done;
  step_t capo_ = 0;
  step_t oldcapo_ = 0;
  step_t check_ = -1;

  std::optional<detail::BinomialMachine> offline_;

  // online forward
  std::vector<step_t> online_slots_;
  step_t stride_ = 1;
  step_t shot_at_ = -1;

  // online reverse: (step, slot) of surviving checkpoints, ascending
  std::vector<std::pair<step_t, step_t>> segments_;
  step_t segment_ = -1;
  std::optional<detail::BinomialMachine> sub_;
  std::vector<step_t> sub_slots_;
  step_t sub_base_ = 0;
  bool adjoint_started_ = false;
};

struct ScheduleReport {
  std::vector<Action> actions;
  step_t advance_count = 0;
  step_t takeshot_count = 0;
  step_t restore_count = 0;
  step_t adjoint_count = 0;
  step_t peak_slots_used = 0;
};

/// Accumulates counters for one action.
inline void tally(ScheduleReport& report, const Action& a) {
  switch (a.kind) {
    case ActionKind::Advance:
      report.advance_count += a.capo - a.old_capo;
      break;
    case ActionKind::Takeshot:
      ++report.takeshot_count;
      report.peak_slots_used = std::max(report.peak_slots_used, *a.check + 1);
      break;
    case ActionKind::Restore:
      ++report.restore_count;
      break;
    case ActionKind::Firstrun:
    case ActionKind::Youturn:
      ++report.adjoint_count;
      break;
    default:
      break;
  }
  report.actions.push_back(a);
}

/// Runs a fresh offline controller to completion.
inline ScheduleReport generate_schedule(step_t steps, step_t snaps) {
  Controller controller(steps, snaps);
  ScheduleReport report;
  for (;;) {
    const Action a = controller.next_action();
    tally(report, a);
    if (a.kind == ActionKind::Terminate) {
      return report;
    }
    if (a.kind == ActionKind::Error) {
      throw ProtocolError("generate_schedule: controller reported an error at state " +
                          std::to_string(a.capo));
    }
  }
}

}  // namespace revolve
