#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <ostream>
#include <vector>

#include "revolve/revolver.hpp"
#include "revolve/storage.hpp"
#include "revolve/wave/model.hpp"
#include "revolve/wave/solver.hpp"

namespace revolve::wave {

/// Sources with their wavelets, receivers with the observed data.
struct Survey {
  PointSet sources;
  PointSet observed;
};

struct WorkReport {
  step_t n_checkpoints = 0;
  step_t forward_advances = 0;     // advance steps before the first adjoint step
  step_t recomputed_advances = 0;  // advance steps after it
  step_t takeshots = 0;
  step_t restores = 0;
  step_t adjoint_steps = 0;
  step_t peak_live_slots = 0;
  step_t checkpoint_bytes = 0;  // arena size
  step_t full_history_bytes = 0;

  step_t total_advances() const { return forward_advances + recomputed_advances; }
};

struct GradientResult {
  double objective = 0.0;
  std::vector<double> grad;
  WorkReport work;
  std::vector<Action> trace;
};

/// Bytes needed to keep every forward state (two levels each) in memory.
inline step_t full_history_bytes(const Model& model) {
  return estimate_full_storage(2 * static_cast<step_t>(model.nx()), model.nt,
                               static_cast<step_t>(sizeof(double)));
}

/// Synthetic receiver data for the survey geometry.
inline PointSet forward_model(const Model& model, const Survey& survey) {
  PointSet d_syn(survey.observed.positions, model.nt);
  Wavefield state(model.nx());
  ForwardOperator fwd(model, survey.sources, state, d_syn);
  fwd.apply(0, model.nt);
  return d_syn;
}

inline double objective_at(const Model& model, const Survey& survey) {
  const double phi = objective(forward_model(model, survey), survey.observed);
  if (!std::isfinite(phi)) {
    throw NumericalError("objective is not finite");
  }
  return phi;
}

/// Reference gradient: keeps every forward level, then runs the reverse
/// recurrence with the same kernels the checkpointed path uses.
inline GradientResult full_storage_gradient(const Model& model, const Survey& survey) {
  model.check();
  const std::size_t nx = model.nx();
  const auto nt = static_cast<std::size_t>(model.nt);
  const Coefficients coeffs(model);
  const auto src = stencils(survey.sources, model);
  const auto rec = stencils(survey.observed, model);
  survey.sources.check_inside(model);
  survey.observed.check_inside(model);

  // history[k + 1] holds u[k] for k = -1 .. nt
  std::vector<std::vector<double>> history(nt + 2, std::vector<double>(nx, 0.0));
  PointSet d_syn(survey.observed.positions, model.nt);
  for (std::size_t t = 0; t < nt; ++t) {
    forward_step(coeffs, history[t], history[t + 1], src, survey.sources,
                 static_cast<step_t>(t), history[t + 2]);
    for (std::size_t r = 0; r < rec.size(); ++r) {
      d_syn.traces[r][t] = detail::sample(rec[r], history[t + 2]);
    }
  }

  GradientResult out;
  out.objective = objective(d_syn, survey.observed);
  GradientAccumulator grad(nx);
  AdjointField adj(nx, model.nt);
  std::vector<double> residual(rec.size(), 0.0);
  for (std::size_t t = nt; t-- > 0;) {
    for (std::size_t r = 0; r < rec.size(); ++r) {
      residual[r] = d_syn.traces[r][t] - survey.observed.traces[r][t];
    }
    adjoint_step(coeffs, history[t], history[t + 1], history[t + 2], rec, residual, adj,
                 grad.grad);
  }
  out.grad = std::move(grad.grad);
  out.work.adjoint_steps = model.nt;
  out.work.forward_advances = model.nt;
  out.work.full_history_bytes = full_history_bytes(model);
  return out;
}

namespace detail {

// Working objects shared by the offline and online paths.
struct CheckpointedRun {
  Wavefield state;
  PointSet d_syn;
  GradientAccumulator grad;
  ForwardOperator fwd;
  WavefieldCheckpoint ckp;
  AdjointOperator rev;

  CheckpointedRun(const Model& model, const Survey& survey)
      : state(model.nx()),
        d_syn(survey.observed.positions, model.nt),
        grad(model.nx()),
        fwd(model, survey.sources, state, d_syn),
        ckp(state),
        rev(model, survey.sources, state, d_syn, survey.observed, grad) {}

  CheckpointedRun(const CheckpointedRun&) = delete;
  CheckpointedRun& operator=(const CheckpointedRun&) = delete;
};

template <class R>
GradientResult finish(CheckpointedRun& run, const R& revolver, const Model& model) {
  GradientResult out;
  if (!run.rev.objective_value()) {
    throw ProtocolError("reverse sweep never ran");
  }
  out.objective = *run.rev.objective_value();
  out.grad = run.grad.grad;
  out.trace = revolver.trace();
  out.work.n_checkpoints = revolver.n_checkpoints();
  out.work.checkpoint_bytes = revolver.storage().allocated_bytes();
  out.work.peak_live_slots = revolver.storage().peak_live();
  out.work.full_history_bytes = full_history_bytes(model);
  return out;
}

}  // namespace detail

/// Gradient through the offline binomial schedule. Bit-identical to
/// full_storage_gradient for any slot count.
inline GradientResult checkpointed_gradient(const Model& model, const Survey& survey,
                                            std::optional<step_t> n_checkpoints,
                                            std::ostream* trace_log = nullptr) {
  detail::CheckpointedRun run(model, survey);
  Revolver revolver(run.ckp, run.fwd, run.rev, n_checkpoints, model.nt);
  revolver.set_trace_log(trace_log);
  const ForwardReport fw = revolver.apply_forward();
  const ReverseReport rv = revolver.apply_reverse();
  GradientResult out = detail::finish(run, revolver, model);
  out.work.forward_advances = fw.advance_steps;
  out.work.recomputed_advances = rv.advance_steps_recomputed;
  out.work.takeshots = fw.takeshots + rv.takeshots;
  out.work.restores = rv.restores;
  out.work.adjoint_steps = rv.adjoint_steps;
  return out;
}

/// Gradient with the step count withheld from the scheduler until the
/// forward sweep ends.
inline GradientResult online_gradient(const Model& model, const Survey& survey,
                                      step_t n_checkpoints, std::ostream* trace_log = nullptr) {
  detail::CheckpointedRun run(model, survey);
  Revolver revolver(run.ckp, run.fwd, run.rev, n_checkpoints, std::nullopt);
  revolver.set_trace_log(trace_log);
  step_t shots = 0;
  for (step_t t = 0; t < model.nt; ++t) {
    shots += revolver.online_step_forward().checkpoint_taken ? 1 : 0;
  }
  const ReverseReport rv = revolver.online_finalize_and_reverse();
  GradientResult out = detail::finish(run, revolver, model);
  out.work.forward_advances = model.nt;
  out.work.recomputed_advances = rv.advance_steps_recomputed;
  out.work.takeshots = shots + rv.takeshots;
  out.work.restores = rv.restores;
  out.work.adjoint_steps = rv.adjoint_steps;
  return out;
}

}  // namespace revolve::wave
