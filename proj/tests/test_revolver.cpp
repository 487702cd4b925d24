#include <gtest/gtest.h>

#include <sstream>
#include <stdexcept>

#include "revolve/revolve.hpp"
#include "toy.hpp"

using namespace revolve;

namespace {

struct Rig {
  toy::State state;
  std::vector<std::uint64_t> expected;
  toy::Checkpoint ckp{state};
  toy::Forward fwd{state};
  toy::Reverse rev;

  explicit Rig(step_t steps) : expected(toy::history(steps, 12345)), rev{state, expected} {
    state.x = expected[0];
  }
};

void expect_full_reversal(const toy::Reverse& rev, step_t steps) {
  ASSERT_EQ(static_cast<step_t>(rev.visited.size()), steps);
  for (step_t i = 0; i < steps; ++i) {
    EXPECT_EQ(rev.visited[static_cast<std::size_t>(i)], steps - 1 - i);
  }
  EXPECT_EQ(rev.wrong_state, 0);
}

}  // namespace

TEST(Revolver, OfflineReversesWithCorrectStates) {
  for (step_t steps : {1, 2, 3, 10, 57, 200}) {
    for (step_t snaps : {1, 2, 3, 6, 300}) {
      Rig rig(steps);
      Revolver r(rig.ckp, rig.fwd, rig.rev, snaps, steps);
      const ForwardReport fw = r.apply_forward();
      EXPECT_EQ(rig.state.t, steps - 1);
      const ReverseReport rv = r.apply_reverse();
      expect_full_reversal(rig.rev, steps);
      EXPECT_EQ(fw.advance_steps + rv.advance_steps_recomputed, min_advances(steps, snaps));
      EXPECT_EQ(rig.fwd.steps_run, min_advances(steps, snaps));
      EXPECT_EQ(rv.adjoint_steps, steps);
      EXPECT_LE(rv.peak_live_slots, snaps);
      EXPECT_TRUE(validate_schedule(r.trace(), steps, snaps).ok());
    }
  }
}

TEST(Revolver, DefaultsToAdjust) {
  Rig rig(100);
  Revolver r(rig.ckp, rig.fwd, rig.rev, std::nullopt, 100);
  EXPECT_EQ(r.n_checkpoints(), adjust(100));
  EXPECT_EQ(r.mode(), Mode::Offline);
}

TEST(Revolver, ArenaIsSlotsTimesSize) {
  Rig rig(10);
  rig.ckp.padding = 13;
  Revolver r(rig.ckp, rig.fwd, rig.rev, 7, 10);
  EXPECT_EQ(r.storage().allocated_bytes(), 7 * static_cast<step_t>(sizeof(toy::State) + 13));
}

TEST(Revolver, ConfigErrors) {
  Rig rig(10);
  using R = Revolver<toy::Checkpoint, toy::Forward, toy::Reverse>;
  EXPECT_THROW(R(rig.ckp, rig.fwd, rig.rev, std::nullopt, std::nullopt), ConfigError);
  EXPECT_THROW(R(rig.ckp, rig.fwd, rig.rev, 0, 10), ConfigError);
  EXPECT_THROW(R(rig.ckp, rig.fwd, rig.rev, 3, 0), ConfigError);
}

TEST(Revolver, ProtocolErrors) {
  Rig rig(10);
  Revolver r(rig.ckp, rig.fwd, rig.rev, 3, 10);
  EXPECT_THROW(r.apply_reverse(), ProtocolError);
  EXPECT_THROW(r.online_step_forward(), ProtocolError);
  r.apply_forward();
  EXPECT_THROW(r.apply_forward(), ProtocolError);
  r.apply_reverse();
  EXPECT_THROW(r.apply_reverse(), ProtocolError);

  Rig rig2(10);
  Revolver online(rig2.ckp, rig2.fwd, rig2.rev, 3, std::nullopt);
  EXPECT_EQ(online.mode(), Mode::Online);
  EXPECT_THROW(online.apply_forward(), ProtocolError);
  EXPECT_THROW(online.online_finalize_and_reverse(), ProtocolError);
}

TEST(Revolver, OperatorFailureIsWrapped) {
  struct Failing {
    void apply(step_t, step_t) { throw std::runtime_error("boom"); }
  };
  Rig rig(10);
  Failing bad;
  Revolver r(rig.ckp, bad, rig.rev, 3, 10);
  try {
    r.apply_forward();
    FAIL() << "expected OperatorError";
  } catch (const OperatorError& e) {
    EXPECT_NE(std::string(e.what()).find("advance [0,"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("boom"), std::string::npos);
  }
}

TEST(Revolver, NumericalErrorKeepsType) {
  struct Blowup {
    void apply(step_t, step_t) { throw NumericalError("nan"); }
  };
  Rig rig(5);
  Blowup bad;
  Revolver r(rig.ckp, rig.fwd, bad, 2, 5);
  r.apply_forward();
  EXPECT_THROW(r.apply_reverse(), NumericalError);
}

TEST(Revolver, TraceLog) {
  Rig rig(12);
  std::stringstream log;
  Revolver r(rig.ckp, rig.fwd, rig.rev, 3, 12);
  r.set_trace_log(&log);
  r.apply_forward();
  r.apply_reverse();
  std::vector<Action> parsed;
  std::string line;
  while (std::getline(log, line)) {
    const auto j = nlohmann::json::parse(line);
    ASSERT_TRUE(j.contains("wallclock"));
    EXPECT_GE(j["wallclock"].get<double>(), 0.0);
    parsed.push_back(action_from_json(j));
  }
  EXPECT_EQ(parsed, r.trace());
}

TEST(Revolver, OnlineReversesWithCorrectStates) {
  for (step_t steps : {1, 2, 9, 64, 333}) {
    for (step_t snaps : {1, 2, 4, 5, 16}) {
      Rig rig(steps);
      Revolver r(rig.ckp, rig.fwd, rig.rev, snaps, std::nullopt);
      for (step_t t = 0; t < steps; ++t) {
        r.online_step_forward();
        ASSERT_LE(r.storage().live_count(), snaps);
      }
      EXPECT_EQ(r.online_steps(), steps);
      const ReverseReport rv = r.online_finalize_and_reverse();
      expect_full_reversal(rig.rev, steps);
      EXPECT_EQ(rv.adjoint_steps, steps);
      EXPECT_LE(rv.peak_live_slots, snaps);
      EXPECT_LE(r.storage().peak_live(), snaps);
      const auto v = validate_schedule(r.trace(), steps, snaps);
      EXPECT_TRUE(v.ok()) << steps << "," << snaps << ": " << v.violation->message;
    }
  }
}

TEST(Revolver, OnlineSlotsAfterNineSteps) {
  Rig rig(9);
  Revolver r(rig.ckp, rig.fwd, rig.rev, 4, std::nullopt);
  int taken = 0;
  for (int t = 0; t < 9; ++t) {
    taken += r.online_step_forward().checkpoint_taken ? 1 : 0;
  }
  std::vector<step_t> held;
  for (step_t t : r.controller().online_slots()) {
    if (t >= 0) {
      held.push_back(t);
    }
  }
  std::sort(held.begin(), held.end());
  EXPECT_EQ(held, (std::vector<step_t>{0, 4, 8}));
  EXPECT_EQ(taken, 7);  // 0, 1, 2, 3, 4, 6, 8
  EXPECT_EQ(r.storage().live_count(), 3);
}
