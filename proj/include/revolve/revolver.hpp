#pragma once

#include <algorithm>
#include <chrono>
#include <concepts>
#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "revolve/action.hpp"
#include "revolve/cost.hpp"
#include "revolve/error.hpp"
#include "revolve/schedule.hpp"
#include "revolve/serialize.hpp"
#include "revolve/storage.hpp"

namespace revolve {

/// Application state that can be copied into and out of a storage slot.
/// save() must deep-copy all time-dependent working data; load() must
/// restore it so that later forward steps are bit-identical.
template <class T>
concept Checkpoint = requires(T& c, const T& cc, std::span<std::byte> out,
                              std::span<const std::byte> in) {
  { cc.size() } -> std::convertible_to<step_t>;
  c.save(out);
  c.load(in);
};

/// Runs a computation over the step range [t_start, t_end).
template <class T>
concept Operator = requires(T& op, step_t t_start, step_t t_end) { op.apply(t_start, t_end); };

/// An operator threw; the message names the action and time range.
class OperatorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ForwardReport {
  step_t advance_steps = 0;
  step_t takeshots = 0;
};

struct ReverseReport {
  step_t advance_steps_recomputed = 0;
  step_t restores = 0;
  step_t takeshots = 0;
  step_t adjoint_steps = 0;
  step_t peak_live_slots = 0;
};

enum class Mode { Offline, Online };

/// Drives a forward and a reverse operator through a checkpoint schedule.
///
/// The revolver does not own the checkpoint or the operators; they must
/// outlive it. Operators are invoked strictly one at a time and the
/// checkpoint bytes are never inspected.
///
/// Offline usage: apply_forward(), then whatever needs the final forward
/// state, then apply_reverse(). Online usage: online_step_forward() once per
/// step, then online_finalize_and_reverse().
template <Checkpoint Ckp, Operator Fwd, Operator Rev>
class Revolver {
 public:
  Revolver(Ckp& checkpoint, Fwd& op_forward, Rev& op_reverse,
           std::optional<step_t> n_checkpoints, std::optional<step_t> n_timesteps)
      : checkpoint_(checkpoint),
        op_forward_(op_forward),
        op_reverse_(op_reverse),
        n_timesteps_(n_timesteps),
        n_checkpoints_(resolve_slots(n_checkpoints, n_timesteps)),
        storage_(n_checkpoints_, slot_size(checkpoint)),
        controller_(n_timesteps, n_checkpoints_) {}

  Mode mode() const { return n_timesteps_ ? Mode::Offline : Mode::Online; }
  step_t n_checkpoints() const { return n_checkpoints_; }
  std::optional<step_t> n_timesteps() const { return n_timesteps_; }
  const Storage& storage() const { return storage_; }
  const Controller& controller() const { return controller_; }

  /// Every action executed so far, in order.
  const std::vector<Action>& trace() const { return trace_; }

  /// When set, each executed action is also written as a JSON line with a
  /// "wallclock" field (seconds spent executing it).
  void set_trace_log(std::ostream* out) { trace_log_ = out; }

  /// Executes the schedule up to, not including, the first adjoint step.
  ForwardReport apply_forward() {
    if (mode() != Mode::Offline) {
      throw ProtocolError("apply_forward: revolver is in online mode");
    }
    if (phase_ != Phase::Fresh) {
      throw ProtocolError("apply_forward: forward sweep already done");
    }
    ForwardReport report;
    for (;;) {
      const Action a = controller_.next_action();
      switch (a.kind) {
        case ActionKind::Advance:
          execute(a);
          report.advance_steps += a.capo - a.old_capo;
          break;
        case ActionKind::Takeshot:
          execute(a);
          ++report.takeshots;
          break;
        case ActionKind::Firstrun:
          pending_ = a;
          phase_ = Phase::ForwardDone;
          return report;
        default:
          phase_ = Phase::Failed;
          throw ProtocolError("apply_forward: unexpected " + std::string(to_string(a.kind)) +
                              " at state " + std::to_string(a.capo));
      }
    }
  }

  /// Executes the rest of the schedule, starting with the first adjoint step.
  ReverseReport apply_reverse() {
    if (mode() != Mode::Offline) {
      throw ProtocolError("apply_reverse: revolver is in online mode");
    }
    if (phase_ != Phase::ForwardDone || !pending_) {
      throw ProtocolError("apply_reverse: apply_forward has not completed");
    }
    ReverseReport report;
    const Action first = *pending_;
    pending_.reset();
    count(report, first);
    execute(first);
    drain(report);
    return report;
  }

  struct OnlineStep {
    bool checkpoint_taken = false;
  };

  /// Online mode: advances the working state by one step, checkpointing the
  /// current state first when the eviction policy wants it.
  OnlineStep online_step_forward() {
    if (mode() != Mode::Online) {
      throw ProtocolError("online_step_forward: revolver is in offline mode");
    }
    if (phase_ != Phase::Fresh) {
      throw ProtocolError("online_step_forward: reverse sweep already started");
    }
    OnlineStep step;
    for (;;) {
      const Action a = controller_.next_action();
      if (a.kind == ActionKind::Takeshot) {
        execute(a);
        step.checkpoint_taken = true;
        continue;
      }
      if (a.kind != ActionKind::Advance) {
        phase_ = Phase::Failed;
        throw ProtocolError("online_step_forward: unexpected " + std::string(to_string(a.kind)));
      }
      execute(a);
      ++online_steps_;
      return step;
    }
  }

  /// Online mode: freezes the step count and runs the whole reverse sweep.
  ReverseReport online_finalize_and_reverse() {
    if (mode() != Mode::Online) {
      throw ProtocolError("online_finalize_and_reverse: revolver is in offline mode");
    }
    if (phase_ != Phase::Fresh) {
      throw ProtocolError("online_finalize_and_reverse: reverse sweep already done");
    }
    if (online_steps_ < 1) {
      throw ProtocolError("online_finalize_and_reverse: no forward step was taken");
    }
    controller_.finish_forward();
    phase_ = Phase::ForwardDone;
    ReverseReport report;
    drain(report);
    return report;
  }

  /// Steps seen by the online forward sweep.
  step_t online_steps() const { return online_steps_; }

 private:
  enum class Phase { Fresh, ForwardDone, Done, Failed };

  static step_t resolve_slots(std::optional<step_t> n_checkpoints,
                              std::optional<step_t> n_timesteps) {
    if (n_checkpoints) {
      if (*n_checkpoints < 1) {
        throw ConfigError("revolver: n_checkpoints must be >= 1");
      }
      return *n_checkpoints;
    }
    if (!n_timesteps) {
      throw ConfigError("revolver: need n_checkpoints or n_timesteps");
    }
    return adjust(*n_timesteps);
  }

  static step_t slot_size(const Ckp& checkpoint) {
    const auto size = static_cast<step_t>(checkpoint.size());
    if (size < 1) {
      throw ConfigError("revolver: checkpoint size must be >= 1");
    }
    return size;
  }

  void drain(ReverseReport& report) {
    for (;;) {
      const Action a = controller_.next_action();
      if (a.kind == ActionKind::Terminate) {
        record(a, 0.0);
        phase_ = Phase::Done;
        return;
      }
      if (a.kind == ActionKind::Error) {
        phase_ = Phase::Failed;
        throw ProtocolError("reverse sweep: controller error at state " + std::to_string(a.capo));
      }
      count(report, a);
      execute(a);
      report.peak_live_slots = std::max(report.peak_live_slots, storage_.peak_live());
    }
  }

  static void count(ReverseReport& report, const Action& a) {
    switch (a.kind) {
      case ActionKind::Advance:
        report.advance_steps_recomputed += a.capo - a.old_capo;
        break;
      case ActionKind::Restore:
        ++report.restores;
        break;
      case ActionKind::Takeshot:
        ++report.takeshots;
        break;
      case ActionKind::Firstrun:
      case ActionKind::Youturn:
        ++report.adjoint_steps;
        break;
      default:
        break;
    }
  }

  void execute(const Action& a) {
    const auto started = std::chrono::steady_clock::now();
    try {
      switch (a.kind) {
        case ActionKind::Advance:
          op_forward_.apply(a.old_capo, a.capo);
          break;
        case ActionKind::Takeshot:
          checkpoint_.save(storage_.get_item(*a.check));
          storage_.mark_live(*a.check);
          break;
        case ActionKind::Restore:
          checkpoint_.load(std::span<const std::byte>(storage_.get_item(*a.check)));
          break;
        case ActionKind::Firstrun:
        case ActionKind::Youturn:
          op_reverse_.apply(a.capo, a.capo + 1);
          break;
        default:
          break;
      }
    } catch (const NumericalError& e) {
      phase_ = Phase::Failed;
      throw NumericalError(context(a) + e.what());
    } catch (const ProtocolError& e) {
      phase_ = Phase::Failed;
      throw ProtocolError(context(a) + e.what());
    } catch (const std::exception& e) {
      phase_ = Phase::Failed;
      throw OperatorError(context(a) + e.what());
    }
    sync_liveness();
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - started;
    record(a, elapsed.count());
  }

  // Slots the schedule has let go of no longer count as live.
  void sync_liveness() {
    for (step_t i = 0; i < n_checkpoints_; ++i) {
      if (storage_.is_live(i) && !controller_.slot_live(i)) {
        storage_.release(i);
      }
    }
  }

  void record(const Action& a, double seconds) {
    trace_.push_back(a);
    if (trace_log_ != nullptr) {
      auto j = to_json(a);
      j["wallclock"] = seconds;
      *trace_log_ << j.dump() << '\n';
    }
  }

  static std::string context(const Action& a) {
    std::string where = std::string(to_string(a.kind));
    if (a.kind == ActionKind::Advance) {
      where += " [" + std::to_string(a.old_capo) + ", " + std::to_string(a.capo) + ")";
    } else if (a.is_adjoint()) {
      where += " [" + std::to_string(a.capo) + ", " + std::to_string(a.capo + 1) + ")";
    } else if (a.check) {
      where += " slot " + std::to_string(*a.check);
    }
    return where + ": ";
  }

  Ckp& checkpoint_;
  Fwd& op_forward_;
  Rev& op_reverse_;
  std::optional<step_t> n_timesteps_;
  step_t n_checkpoints_;
  Storage storage_;
  Controller controller_;

  Phase phase_ = Phase::Fresh;
  std::optional<Action> pending_;
  step_t online_steps_ = 0;
  std::vector<Action> trace_;
  std::ostream* trace_log_ = nullptr;
};

}  // namespace revolve
