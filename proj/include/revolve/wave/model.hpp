#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "revolve/error.hpp"

namespace revolve::wave {

/// Upper bound on v * dt / spacing for the explicit 1D leapfrog scheme.
inline constexpr double kCflFactor = 1.0;

/// Physical model on a uniform 1D grid.
///   m    squared slowness, s^2/km^2
///   eta  damping coefficient of the first time derivative term
struct Model {
  std::vector<double> m;
  std::vector<double> eta;
  double spacing = 0.01;  // km
  double dt = 0.002;      // s
  step_t nt = 0;

  std::size_t nx() const { return m.size(); }
  double length() const { return spacing * static_cast<double>(nx() - 1); }

  /// Throws ConfigError unless m > 0 everywhere, the grids agree and
  /// dt <= kCflFactor * spacing * sqrt(min m).
  void check() const {
    if (m.size() < 3 || eta.size() != m.size()) {
      throw ConfigError("model: need at least 3 points and matching damping profile");
    }
    if (nt < 1 || !(dt > 0.0) || !(spacing > 0.0)) {
      throw ConfigError("model: nt, dt and spacing must be positive");
    }
    const double m_min = *std::min_element(m.begin(), m.end());
    if (!(m_min > 0.0)) {
      throw ConfigError("model: squared slowness must be positive");
    }
    const double limit = kCflFactor * spacing * std::sqrt(m_min);
    if (dt > limit) {
      throw ConfigError("model: dt = " + std::to_string(dt) + " exceeds the stability limit " +
                        std::to_string(limit));
    }
  }
};

/// Linear taper rising from zero to `strength` over `width` points at both
/// ends of the grid; zero in the interior.
inline std::vector<double> damping_profile(std::size_t nx, std::size_t width, double strength) {
  std::vector<double> eta(nx, 0.0);
  for (std::size_t k = 0; k < width && k < nx; ++k) {
    const double ramp = strength * static_cast<double>(width - k) / static_cast<double>(width);
    eta[k] = std::max(eta[k], ramp);
    eta[nx - 1 - k] = std::max(eta[nx - 1 - k], ramp);
  }
  return eta;
}

/// Sources or receivers: positions in km, one trace of nt samples each.
struct PointSet {
  std::vector<double> positions;
  std::vector<std::vector<double>> traces;

  PointSet() = default;
  PointSet(std::vector<double> pos, step_t nt)
      : positions(std::move(pos)),
        traces(positions.size(), std::vector<double>(static_cast<std::size_t>(nt), 0.0)) {}

  std::size_t size() const { return positions.size(); }

  void check_inside(const Model& model) const {
    for (double x : positions) {
      if (!(x >= 0.0 && x <= model.length())) {
        throw ConfigError("point at " + std::to_string(x) + " km lies outside the grid");
      }
    }
    for (const auto& trace : traces) {
      if (static_cast<step_t>(trace.size()) != model.nt) {
        throw ConfigError("trace length does not match nt");
      }
    }
  }
};

/// Linear interpolation stencil of a point: two grid indices and weights.
struct Stencil {
  std::size_t left = 0;
  double w_left = 1.0;
  double w_right = 0.0;
};

inline Stencil stencil_at(double x, double spacing, std::size_t nx) {
  const double g = x / spacing;
  auto left = static_cast<std::size_t>(std::floor(g));
  if (left >= nx - 1) {
    left = nx - 2;
  }
  const double frac = g - static_cast<double>(left);
  return {left, 1.0 - frac, frac};
}

/// Ricker wavelet with peak frequency f0 (Hz), peaking at t = 1 / f0.
inline std::vector<double> ricker_source(double f0, step_t nt, double dt) {
  if (!(f0 > 0.0) || nt < 1 || !(dt > 0.0)) {
    throw ConfigError("ricker: f0, nt and dt must be positive");
  }
  if (f0 >= 0.5 / dt) {
    throw ConfigError("ricker: f0 must be below the Nyquist frequency");
  }
  const double t0 = 1.0 / f0;
  const double a = std::numbers::pi * std::numbers::pi * f0 * f0;
  std::vector<double> trace(static_cast<std::size_t>(nt));
  for (step_t n = 0; n < nt; ++n) {
    const double tau = static_cast<double>(n) * dt - t0;
    trace[static_cast<std::size_t>(n)] = (1.0 - 2.0 * a * tau * tau) * std::exp(-a * tau * tau);
  }
  return trace;
}

struct TwoLayer {
  std::vector<double> m_true;
  std::vector<double> m0;
};

/// Piecewise-constant squared slowness with velocity v_top above
/// `interface_index` and v_bottom from it on (km/s), plus its smoothed
/// version (centered 5-point moving average, window clipped at the ends).
inline TwoLayer build_two_layer_model(std::size_t nx, std::size_t interface_index, double v_top,
                                      double v_bottom) {
  if (nx < 3 || interface_index == 0 || interface_index >= nx) {
    throw ConfigError("two-layer model: need 0 < interface_index < nx");
  }
  if (!(v_top > 0.0) || !(v_bottom > 0.0)) {
    throw ConfigError("two-layer model: velocities must be positive");
  }
  TwoLayer out;
  out.m_true.resize(nx);
  for (std::size_t i = 0; i < nx; ++i) {
    const double v = i < interface_index ? v_top : v_bottom;
    out.m_true[i] = 1.0 / (v * v);
  }
  constexpr std::size_t kHalf = 2;
  out.m0.resize(nx);
  for (std::size_t i = 0; i < nx; ++i) {
    const std::size_t lo = i >= kHalf ? i - kHalf : 0;
    const std::size_t hi = std::min(nx - 1, i + kHalf);
    double sum = 0.0;
    double lo_v = out.m_true[lo];
    double hi_v = out.m_true[lo];
    for (std::size_t j = lo; j <= hi; ++j) {
      sum += out.m_true[j];
      lo_v = std::min(lo_v, out.m_true[j]);
      hi_v = std::max(hi_v, out.m_true[j]);
    }
    // Clamp so rounding never leaves the window's range; a flat window
    // reproduces its value exactly.
    out.m0[i] = std::clamp(sum / static_cast<double>(hi - lo + 1), lo_v, hi_v);
  }
  return out;
}

}  // namespace revolve::wave
