#pragma once

#include <cmath>
#include <cstddef>
#include <cstring>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "revolve/error.hpp"
#include "revolve/wave/model.hpp"

namespace revolve::wave {

// Discretisation. With u[-1] = u[0] = 0 and L the 3-point Laplacian with
// zero Dirichlet ends, every step n solves
//
//   m (u[n+1] - 2u[n] + u[n-1]) / dt^2 - L u[n]
//     + eta (u[n+1] - u[n-1]) / (2 dt) = Ps^T q[n]
//
// for u[n+1]. Receivers sample d[n] = Pr u[n+1]. The reverse step is the
// exact discrete adjoint of this recurrence, so the gradient it produces
// is the gradient of the discrete objective.

/// Per-point coefficients of the update, precomputed once per model.
struct Coefficients {
  std::vector<double> a;  // m/dt^2 + eta/(2dt), multiplies u[n+1]
  std::vector<double> b;  // m/dt^2 - eta/(2dt), multiplies u[n-1]
  std::vector<double> c;  // 2m/dt^2, multiplies u[n]
  double inv_h2 = 0.0;
  double inv_dt2 = 0.0;

  explicit Coefficients(const Model& model) {
    const std::size_t nx = model.nx();
    a.resize(nx);
    b.resize(nx);
    c.resize(nx);
    inv_dt2 = 1.0 / (model.dt * model.dt);
    inv_h2 = 1.0 / (model.spacing * model.spacing);
    const double half_inv_dt = 0.5 / model.dt;
    for (std::size_t i = 0; i < nx; ++i) {
      a[i] = model.m[i] * inv_dt2 + model.eta[i] * half_inv_dt;
      b[i] = model.m[i] * inv_dt2 - model.eta[i] * half_inv_dt;
      c[i] = 2.0 * model.m[i] * inv_dt2;
    }
  }
};

inline std::vector<Stencil> stencils(const PointSet& points, const Model& model) {
  std::vector<Stencil> out;
  out.reserve(points.size());
  for (double x : points.positions) {
    out.push_back(stencil_at(x, model.spacing, model.nx()));
  }
  return out;
}

namespace detail {

// out[i] = c*cur - b*prev + L cur (no division yet)
inline void wave_rhs(const Coefficients& k, std::span<const double> prev,
                     std::span<const double> cur, std::span<double> out) {
  const std::size_t nx = cur.size();
  for (std::size_t i = 0; i < nx; ++i) {
    const double left = i > 0 ? cur[i - 1] : 0.0;
    const double right = i + 1 < nx ? cur[i + 1] : 0.0;
    out[i] = k.c[i] * cur[i] - k.b[i] * prev[i] + (left - 2.0 * cur[i] + right) * k.inv_h2;
  }
}

inline double sample(const Stencil& s, std::span<const double> field) {
  return s.w_left * field[s.left] + s.w_right * field[s.left + 1];
}

inline void check_finite(std::span<const double> field, step_t t, const char* what) {
  for (double v : field) {
    if (!std::isfinite(v)) {
      throw NumericalError(std::string(what) + " blew up at step " + std::to_string(t));
    }
  }
}

}  // namespace detail

/// Computes u[t+1] from u[t-1] and u[t]. Source traces are added to the
/// right-hand side, so a source sample q lands in the field as q / a, which
/// is q * dt^2 / m wherever the damping vanishes.
inline void forward_step(const Coefficients& k, std::span<const double> prev,
                         std::span<const double> cur, std::span<const Stencil> src_stencils,
                         const PointSet& sources, step_t t, std::span<double> next) {
  detail::wave_rhs(k, prev, cur, next);
  const auto n = static_cast<std::size_t>(t);
  for (std::size_t s = 0; s < src_stencils.size(); ++s) {
    const Stencil& st = src_stencils[s];
    const double q = sources.traces[s][n];
    next[st.left] += st.w_left * q;
    next[st.left + 1] += st.w_right * q;
  }
  for (std::size_t i = 0; i < next.size(); ++i) {
    next[i] /= k.a[i];
  }
  detail::check_finite(next, t, "forward wavefield");
}

/// Two consecutive time levels: prev = u[t-1], cur = u[t]. State t is the
/// input of forward step t.
struct Wavefield {
  std::vector<double> prev;
  std::vector<double> cur;
  step_t t = 0;

  explicit Wavefield(std::size_t nx) : prev(nx, 0.0), cur(nx, 0.0) {}

  void reset() {
    std::fill(prev.begin(), prev.end(), 0.0);
    std::fill(cur.begin(), cur.end(), 0.0);
    t = 0;
  }
};

/// Adjoint field: `next` = v[t+1], `after` = v[t+2]; `cursor` is the step
/// the next reverse call must produce v for, plus one.
struct AdjointField {
  std::vector<double> next;
  std::vector<double> after;
  std::vector<double> scratch;
  step_t cursor = 0;

  AdjointField(std::size_t nx, step_t nt)
      : next(nx, 0.0), after(nx, 0.0), scratch(nx, 0.0), cursor(nt) {}
};

/// Running sum of the gradient with respect to m.
struct GradientAccumulator {
  std::vector<double> grad;

  explicit GradientAccumulator(std::size_t nx) : grad(nx, 0.0) {}
  void reset() { std::fill(grad.begin(), grad.end(), 0.0); }
};

/// Half the squared l2 norm of the residual over all receivers and steps.
inline double objective(const PointSet& d_syn, const PointSet& d_obs) {
  if (d_syn.traces.size() != d_obs.traces.size()) {
    throw ConfigError("objective: receiver counts differ");
  }
  double sum = 0.0;
  for (std::size_t r = 0; r < d_syn.traces.size(); ++r) {
    const auto& syn = d_syn.traces[r];
    const auto& obs = d_obs.traces[r];
    if (syn.size() != obs.size()) {
      throw ConfigError("objective: trace lengths differ");
    }
    for (std::size_t n = 0; n < syn.size(); ++n) {
      const double res = syn[n] - obs[n];
      sum += res * res;
    }
  }
  return 0.5 * sum;
}

/// Reverse step t: with u[t-1], u[t], u[t+1] and the residual of sample t,
/// produces v[t] from v[t+1], v[t+2] and subtracts v[t] * u_tt[t] from the
/// gradient. Only two adjoint levels are kept.
inline void adjoint_step(const Coefficients& k, std::span<const double> u_prev,
                         std::span<const double> u_cur, std::span<const double> u_next,
                         std::span<const Stencil> rec_stencils, std::span<const double> residual,
                         AdjointField& adj, std::span<double> grad) {
  const std::size_t nx = u_cur.size();
  std::span<double> v(adj.scratch);
  // c*v1 - b*v2 + L v1 with v1 = v[t+1], v2 = v[t+2]
  detail::wave_rhs(k, adj.after, adj.next, v);
  for (std::size_t r = 0; r < rec_stencils.size(); ++r) {
    const Stencil& st = rec_stencils[r];
    v[st.left] += st.w_left * residual[r];
    v[st.left + 1] += st.w_right * residual[r];
  }
  for (std::size_t i = 0; i < nx; ++i) {
    v[i] /= k.a[i];
  }
  for (std::size_t i = 0; i < nx; ++i) {
    grad[i] -= v[i] * ((u_next[i] - 2.0 * u_cur[i] + u_prev[i]) * k.inv_dt2);
  }
  std::swap(adj.after, adj.next);
  std::swap(adj.next, adj.scratch);
  adj.cursor -= 1;
  detail::check_finite(adj.next, adj.cursor, "adjoint wavefield");
}

/// Forward operator over [t_start, t_end): steps the working wavefield and
/// records receiver samples into `receivers`.
class ForwardOperator {
 public:
  ForwardOperator(const Model& model, const PointSet& sources, Wavefield& state,
                  PointSet& receivers)
      : model_(model),
        sources_(sources),
        state_(state),
        receivers_(receivers),
        coeffs_(model),
        src_(stencils(sources, model)),
        rec_(stencils(receivers, model)),
        next_(model.nx(), 0.0) {
    model.check();
    sources.check_inside(model);
    receivers.check_inside(model);
  }

  void apply(step_t t_start, step_t t_end) {
    if (state_.t != t_start) {
      throw ProtocolError("forward operator: state is at step " + std::to_string(state_.t) +
                          " but the range starts at " + std::to_string(t_start));
    }
    if (t_end > model_.nt || t_end < t_start) {
      throw ProtocolError("forward operator: bad range [" + std::to_string(t_start) + ", " +
                          std::to_string(t_end) + ")");
    }
    for (step_t t = t_start; t < t_end; ++t) {
      forward_step(coeffs_, state_.prev, state_.cur, src_, sources_, t, next_);
      for (std::size_t r = 0; r < rec_.size(); ++r) {
        receivers_.traces[r][static_cast<std::size_t>(t)] = detail::sample(rec_[r], next_);
      }
      std::swap(state_.prev, state_.cur);
      std::swap(state_.cur, next_);
      state_.t = t + 1;
    }
  }

 private:
  const Model& model_;
  const PointSet& sources_;
  Wavefield& state_;
  PointSet& receivers_;
  Coefficients coeffs_;
  std::vector<Stencil> src_;
  std::vector<Stencil> rec_;
  std::vector<double> next_;
};

/// Checkpoint of the working wavefield. Layout: step index (int64), then
/// u[t-1] and u[t] as doubles.
class WavefieldCheckpoint {
 public:
  explicit WavefieldCheckpoint(Wavefield& state) : state_(state) {}

  std::size_t size() const {
    return sizeof(step_t) + 2 * state_.cur.size() * sizeof(double);
  }

  void save(std::span<std::byte> out) const {
    require(out.size());
    std::byte* p = out.data();
    std::memcpy(p, &state_.t, sizeof(step_t));
    p += sizeof(step_t);
    std::memcpy(p, state_.prev.data(), level_bytes());
    std::memcpy(p + level_bytes(), state_.cur.data(), level_bytes());
  }

  void load(std::span<const std::byte> in) {
    require(in.size());
    const std::byte* p = in.data();
    std::memcpy(&state_.t, p, sizeof(step_t));
    p += sizeof(step_t);
    std::memcpy(state_.prev.data(), p, level_bytes());
    std::memcpy(state_.cur.data(), p + level_bytes(), level_bytes());
  }

 private:
  std::size_t level_bytes() const { return state_.cur.size() * sizeof(double); }

  void require(std::size_t bytes) const {
    if (bytes < size()) {
      throw ConfigError("wavefield checkpoint: slot of " + std::to_string(bytes) +
                        " bytes is smaller than " + std::to_string(size()));
    }
  }

  Wavefield& state_;
};

/// Reverse operator: one adjoint step per call, reading the forward state
/// from the working wavefield (which must sit at t_start). The forward level
/// u[t_start + 1] is recomputed locally, so the working state is untouched.
/// The first call, at t = nt - 1, completes `receivers` and evaluates the
/// objective.
class AdjointOperator {
 public:
  AdjointOperator(const Model& model, const PointSet& sources, const Wavefield& state,
                  PointSet& receivers, const PointSet& observed, GradientAccumulator& grad)
      : model_(model),
        sources_(sources),
        state_(state),
        receivers_(receivers),
        observed_(observed),
        grad_(grad),
        coeffs_(model),
        src_(stencils(sources, model)),
        rec_(stencils(receivers, model)),
        adj_(model.nx(), model.nt),
        u_next_(model.nx(), 0.0),
        residual_(receivers.size(), 0.0) {
    if (observed.size() != receivers.size()) {
      throw ConfigError("adjoint operator: observed and synthetic receiver counts differ");
    }
    observed.check_inside(model);
  }

  void apply(step_t t_start, step_t t_end) {
    if (t_end != t_start + 1) {
      throw ProtocolError("adjoint operator: runs exactly one step per call");
    }
    if (adj_.cursor != t_end) {
      throw ProtocolError("adjoint operator: expected step " + std::to_string(adj_.cursor - 1) +
                          ", got " + std::to_string(t_start));
    }
    if (state_.t != t_start) {
      throw ProtocolError("adjoint operator: missing forward levels for step " +
                          std::to_string(t_start) + " (working state is at " +
                          std::to_string(state_.t) + ")");
    }
    forward_step(coeffs_, state_.prev, state_.cur, src_, sources_, t_start, u_next_);
    const auto n = static_cast<std::size_t>(t_start);
    for (std::size_t r = 0; r < rec_.size(); ++r) {
      receivers_.traces[r][n] = detail::sample(rec_[r], u_next_);
      residual_[r] = receivers_.traces[r][n] - observed_.traces[r][n];
    }
    if (!objective_) {
      objective_ = objective(receivers_, observed_);
    }
    adjoint_step(coeffs_, state_.prev, state_.cur, u_next_, rec_, residual_, adj_, grad_.grad);
  }

  std::optional<double> objective_value() const { return objective_; }
  step_t cursor() const { return adj_.cursor; }
  /// Adjoint levels held at any time.
  static constexpr int adjoint_levels() { return 2; }

 private:
  const Model& model_;
  const PointSet& sources_;
  const Wavefield& state_;
  PointSet& receivers_;
  const PointSet& observed_;
  GradientAccumulator& grad_;
  Coefficients coeffs_;
  std::vector<Stencil> src_;
  std::vector<Stencil> rec_;
  AdjointField adj_;
  std::vector<double> u_next_;
  std::vector<double> residual_;
  std::optional<double> objective_;
};

}  // namespace revolve::wave
