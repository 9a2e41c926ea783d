#pragma once

#include <cmath>
#include <vector>

#include "susyqm/grid.hpp"

namespace susyqm {

/// Fourth-order finite-difference derivative (order 1 or 2). Central
/// five-point stencils in the interior, one-sided fourth-order stencils
/// on the two nodes nearest each edge.
inline SampledFunction differentiate(const SampledFunction& f, int order) {
  if (order != 1 && order != 2) throw invalid_input("differentiate: order must be 1 or 2");
  const std::size_t n = f.size();
  if (n < Grid1D::min_nodes) throw invalid_input("differentiate: grid too small");
  const double h = f.grid().h();
  std::vector<double> d(n);
  auto v = f.values();

  if (order == 1) {
    const double s = 1.0 / (12.0 * h);
    for (std::size_t i = 2; i + 2 < n; ++i) d[i] = (v[i - 2] - 8.0 * v[i - 1] + 8.0 * v[i + 1] - v[i + 2]) * s;
    d[0] = (-25.0 * v[0] + 48.0 * v[1] - 36.0 * v[2] + 16.0 * v[3] - 3.0 * v[4]) * s;
    d[1] = (-3.0 * v[0] - 10.0 * v[1] + 18.0 * v[2] - 6.0 * v[3] + v[4]) * s;
    d[n - 1] = (25.0 * v[n - 1] - 48.0 * v[n - 2] + 36.0 * v[n - 3] - 16.0 * v[n - 4] + 3.0 * v[n - 5]) * s;
    d[n - 2] = (3.0 * v[n - 1] + 10.0 * v[n - 2] - 18.0 * v[n - 3] + 6.0 * v[n - 4] - v[n - 5]) * s;
  } else {
    const double s = 1.0 / (12.0 * h * h);
    for (std::size_t i = 2; i + 2 < n; ++i)
      d[i] = (-v[i - 2] + 16.0 * v[i - 1] - 30.0 * v[i] + 16.0 * v[i + 1] - v[i + 2]) * s;
    d[0] = (45.0 * v[0] - 154.0 * v[1] + 214.0 * v[2] - 156.0 * v[3] + 61.0 * v[4] - 10.0 * v[5]) * s;
    d[1] = (10.0 * v[0] - 15.0 * v[1] - 4.0 * v[2] + 14.0 * v[3] - 6.0 * v[4] + v[5]) * s;
    d[n - 1] = (45.0 * v[n - 1] - 154.0 * v[n - 2] + 214.0 * v[n - 3] - 156.0 * v[n - 4] + 61.0 * v[n - 5] -
                10.0 * v[n - 6]) * s;
    d[n - 2] = (10.0 * v[n - 1] - 15.0 * v[n - 2] - 4.0 * v[n - 3] + 14.0 * v[n - 4] - 6.0 * v[n - 5] +
                v[n - 6]) * s;
  }
  return {f.grid(), std::move(d)};
}

/// First derivative of sixth order in the interior: Richardson combination
/// (16 D_h − D_2h)/15 of the five-point central rule at spacings h and 2h.
/// Nodes within four of an edge keep the fourth-order value.
inline SampledFunction differentiate_fine(const SampledFunction& f) {
  auto d = differentiate(f, 1);
  const std::size_t n = f.size();
  const double h = f.grid().h();
  auto v = f.values();
  std::vector<double> out(d.values().begin(), d.values().end());
  for (std::size_t i = 4; i + 4 < n; ++i) {
    double d2h = (v[i - 4] - 8.0 * v[i - 2] + 8.0 * v[i + 2] - v[i + 4]) / (24.0 * h);
    out[i] = (16.0 * d[i] - d2h) / 15.0;
  }
  return {f.grid(), std::move(out)};
}

/// F(x) = ∫_{x_min}^{x} f dy. Two interleaved composite-Simpson chains:
/// even nodes start from F(x_0)=0, odd nodes from a fourth-order
/// single-interval rule for F(x_1).
inline SampledFunction integrate_cumulative(const SampledFunction& f) {
  const std::size_t n = f.size();
  const double h = f.grid().h();
  auto v = f.values();
  std::vector<double> F(n, 0.0);
  F[1] = h / 12.0 * (5.0 * v[0] + 8.0 * v[1] - v[2]);
  for (std::size_t i = 2; i < n; ++i) F[i] = F[i - 2] + h / 3.0 * (v[i - 2] + 4.0 * v[i - 1] + v[i]);
  return {f.grid(), std::move(F)};
}

/// ∫ f over the whole grid (last value of the cumulative integral).
inline double integrate(const SampledFunction& f) {
  return integrate_cumulative(f).values().back();
}

/// ∫ f² dx.
inline double norm_squared(const SampledFunction& f) { return integrate(f * f); }

/// f scaled to unit L² norm.
inline SampledFunction normalized(const SampledFunction& f) {
  const double n2 = norm_squared(f);
  if (!(n2 > 0.0)) throw invalid_input("normalized: function has zero norm");
  return (1.0 / std::sqrt(n2)) * f;
}

/// Number of sign changes, ignoring nodes whose magnitude is below
/// `rel_floor` times the maximum (numerical noise in the tails).
inline int sign_changes(const SampledFunction& f, double rel_floor = 1e-7) {
  const double floor = rel_floor * f.max_abs();
  int count = 0;
  int last = 0;
  for (double v : f.values()) {
    if (std::abs(v) <= floor) continue;
    int s = v > 0 ? 1 : -1;
    if (last != 0 && s != last) ++count;
    last = s;
  }
  return count;
}

}  // namespace susyqm
