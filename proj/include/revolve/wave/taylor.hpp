#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "revolve/error.hpp"
#include "revolve/wave/gradient.hpp"
#include "revolve/wave/model.hpp"

namespace revolve::wave {

struct TaylorRow {
  double h = 0.0;
  double eps0 = 0.0;  // phi(m0 + h dm) - phi(m0)
  double eps1 = 0.0;  // eps0 - h <grad, dm>
};

struct TaylorTable {
  std::vector<TaylorRow> rows;
  double directional = 0.0;  // <grad, dm>
  std::optional<double> order0;
  std::optional<double> order1;
};

/// Least-squares slope of log|eps| against log h. Empty when any eps is
/// zero or fewer than two points are given.
inline std::optional<double> fitted_order(std::span<const double> h, std::span<const double> eps) {
  if (h.size() != eps.size() || h.size() < 2) {
    return std::nullopt;
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (eps[i] == 0.0) {
      return std::nullopt;
    }
    const double x = std::log(h[i]);
    const double y = std::log(std::abs(eps[i]));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const auto n = static_cast<double>(h.size());
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// Taylor remainder test along dm = m0 - m_true. `model` carries m0 and
/// `grad` must be the gradient at m0. h_values must be positive and
/// strictly decreasing.
inline TaylorTable taylor_test(const Model& model, std::span<const double> m_true,
                               const Survey& survey, std::span<const double> grad,
                               std::span<const double> h_values) {
  const std::size_t nx = model.nx();
  if (m_true.size() != nx || grad.size() != nx) {
    throw ConfigError("taylor test: m_true and grad must match the model grid");
  }
  for (std::size_t i = 0; i < h_values.size(); ++i) {
    if (!(h_values[i] > 0.0) || (i > 0 && !(h_values[i] < h_values[i - 1]))) {
      throw ConfigError("taylor test: h values must be positive and descending");
    }
  }
  std::vector<double> dm(nx);
  TaylorTable table;
  for (std::size_t i = 0; i < nx; ++i) {
    dm[i] = model.m[i] - m_true[i];
    table.directional += grad[i] * dm[i];
  }
  const double phi0 = objective_at(model, survey);

  Model perturbed = model;
  std::vector<double> hs, e0, e1;
  for (double h : h_values) {
    for (std::size_t i = 0; i < nx; ++i) {
      perturbed.m[i] = model.m[i] + h * dm[i];
    }
    const double phi = objective_at(perturbed, survey);
    TaylorRow row{h, phi - phi0, 0.0};
    row.eps1 = row.eps0 - h * table.directional;
    table.rows.push_back(row);
    hs.push_back(h);
    e0.push_back(row.eps0);
    e1.push_back(row.eps1);
  }
  table.order0 = fitted_order(hs, e0);
  table.order1 = fitted_order(hs, e1);
  return table;
}

}  // namespace revolve::wave
