#pragma once

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "revolve/cost.hpp"
#include "revolve/wave/gradient.hpp"
#include "revolve/wave/model.hpp"
#include "revolve/wave/taylor.hpp"

namespace revolve::wave {

/// Two-layer 1D configuration. Defaults are stability-checked: with
/// v <= 2.5 km/s, spacing 10 m and dt 2 ms the Courant number is 0.5.
struct DemoConfig {
  std::size_t nx = 201;
  step_t nt = 500;
  double spacing = 0.01;  // km
  double dt = 0.002;      // s
  std::optional<std::size_t> interface_index;  // default (nx + 1) / 2
  double v_top = 1.5;     // km/s
  double v_bottom = 2.5;  // km/s
  double f0 = 10.0;       // Hz
  std::size_t damping_width = 20;
  double damping_strength = 30.0;
  // positions as fractions of the grid length
  double source_at = 0.2;
  std::vector<double> receivers_at = {0.15, 0.25, 0.35, 0.45, 0.7, 0.8};
};

struct DemoProblem {
  Model model;  // carries m0
  std::vector<double> m_true;
  Survey survey;  // observed data modelled on m_true
};

inline DemoProblem make_demo(const DemoConfig& cfg) {
  if (cfg.nx < 2 * cfg.damping_width + 3) {
    throw ConfigError("demo: nx too small for the damping layers");
  }
  const std::size_t iface = cfg.interface_index.value_or((cfg.nx + 1) / 2);
  const TwoLayer layers = build_two_layer_model(cfg.nx, iface, cfg.v_top, cfg.v_bottom);

  DemoProblem p;
  p.model.eta = damping_profile(cfg.nx, cfg.damping_width, cfg.damping_strength);
  p.model.spacing = cfg.spacing;
  p.model.dt = cfg.dt;
  p.model.nt = cfg.nt;
  p.model.m = layers.m_true;
  p.model.check();
  p.m_true = layers.m_true;

  const double length = p.model.length();
  p.survey.sources = PointSet({cfg.source_at * length}, cfg.nt);
  p.survey.sources.traces[0] = ricker_source(cfg.f0, cfg.nt, cfg.dt);
  std::vector<double> rec;
  for (double f : cfg.receivers_at) {
    rec.push_back(f * length);
  }
  p.survey.observed = PointSet(rec, cfg.nt);
  p.survey.observed = forward_model(p.model, p.survey);

  p.model.m = layers.m0;
  p.model.check();
  return p;
}

/// FNV-1a over the raw bytes; equal checksums mean bit-identical gradients
/// (up to hash collisions).
inline std::string gradient_checksum(std::span<const double> grad) {
  std::uint64_t h = 14695981039346656037ULL;
  for (double v : grad) {
    unsigned char bytes[sizeof(double)];
    std::memcpy(bytes, &v, sizeof(double));
    for (unsigned char b : bytes) {
      h ^= b;
      h *= 1099511628211ULL;
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

enum class DemoMode { Checkpointed, FullStorage, Online };

inline constexpr double kTaylorSteps[] = {1e-1, 1e-2, 1e-3, 1e-4};

inline nlohmann::json to_json(const WorkReport& w) {
  return {{"nCheckpoints", w.n_checkpoints},
          {"forwardAdvances", w.forward_advances},
          {"recomputedAdvances", w.recomputed_advances},
          {"totalAdvances", w.total_advances()},
          {"takeshots", w.takeshots},
          {"restores", w.restores},
          {"adjointSteps", w.adjoint_steps},
          {"peakLiveSlots", w.peak_live_slots},
          {"peakCheckpointBytes", w.checkpoint_bytes},
          {"fullHistoryBytes", w.full_history_bytes}};
}

inline nlohmann::json to_json(const TaylorTable& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : t.rows) {
    rows.push_back({{"h", r.h}, {"eps0", r.eps0}, {"eps1", r.eps1}});
  }
  const auto opt = [](const std::optional<double>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
  };
  return {{"rows", rows},
          {"directionalDerivative", t.directional},
          {"order0", opt(t.order0)},
          {"order1", opt(t.order1)}};
}

struct DemoOutcome {
  GradientResult gradient;
  TaylorTable taylor;
  nlohmann::json report;
};

/// Computes the gradient at m0 in the requested mode, runs the Taylor test
/// with it and assembles the JSON report. Checkpointed modes can log the
/// executed actions to `trace_log`.
inline DemoOutcome run_demo(const DemoConfig& cfg, DemoMode mode, std::optional<step_t> snaps,
                            std::ostream* trace_log = nullptr) {
  const DemoProblem p = make_demo(cfg);
  DemoOutcome out;
  const char* mode_name = "checkpointed";
  switch (mode) {
    case DemoMode::FullStorage:
      out.gradient = full_storage_gradient(p.model, p.survey);
      mode_name = "full-storage";
      break;
    case DemoMode::Online:
      out.gradient = online_gradient(p.model, p.survey, snaps.value_or(adjust(cfg.nt)), trace_log);
      mode_name = "online";
      break;
    case DemoMode::Checkpointed:
      out.gradient = checkpointed_gradient(p.model, p.survey, snaps, trace_log);
      break;
  }
  out.taylor = taylor_test(p.model, p.m_true, p.survey, out.gradient.grad, kTaylorSteps);
  out.report = {{"mode", mode_name},
                {"nx", cfg.nx},
                {"nt", cfg.nt},
                {"objective", out.gradient.objective},
                {"gradientChecksum", gradient_checksum(out.gradient.grad)},
                {"taylor", to_json(out.taylor)},
                {"work", to_json(out.gradient.work)}};
  return out;
}

}  // namespace revolve::wave
