#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "susyqm/error.hpp"

namespace susyqm::tridiag {

/// Symmetric tridiagonal matrix: `diag` of size m, `off` of size m-1.
struct SymTridiagonal {
  std::vector<double> diag;
  std::vector<double> off;

  std::size_t size() const noexcept { return diag.size(); }
};

/// Number of eigenvalues strictly below `x` (Sturm sequence / LDLᵀ inertia).
inline std::size_t count_below(const SymTridiagonal& t, double x) {
  constexpr double tiny = std::numeric_limits<double>::min() * 1e6;
  std::size_t neg = 0;
  double q = t.diag[0] - x;
  if (q == 0.0) q = -tiny;
  if (q < 0.0) ++neg;
  for (std::size_t i = 1; i < t.size(); ++i) {
    q = t.diag[i] - x - t.off[i - 1] * t.off[i - 1] / q;
    if (q == 0.0) q = -tiny;
    if (q < 0.0) ++neg;
  }
  return neg;
}

inline double gershgorin_lower(const SymTridiagonal& t) {
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < t.size(); ++i) {
    double r = (i > 0 ? std::abs(t.off[i - 1]) : 0.0) + (i + 1 < t.size() ? std::abs(t.off[i]) : 0.0);
    lo = std::min(lo, t.diag[i] - r);
  }
  return lo;
}

/// The `count` smallest eigenvalues, ascending, by bisection on the Sturm count.
inline std::vector<double> lowest_eigenvalues(const SymTridiagonal& t, std::size_t count) {
  if (count == 0 || count > t.size()) throw invalid_input("lowest_eigenvalues: bad count");
  const double lo0 = gershgorin_lower(t) - 1.0;
  std::vector<double> out;
  out.reserve(count);
  double lo_start = lo0;
  for (std::size_t k = 0; k < count; ++k) {
    double lo = lo_start;
    double step = std::max(1.0, std::abs(lo));
    double hi = lo + step;
    while (count_below(t, hi) < k + 1) {
      lo = hi;
      step *= 2.0;
      hi = lo + step;
    }
    for (int it = 0; it < 400; ++it) {
      double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(lo), std::abs(hi)))
        break;
      if (count_below(t, mid) >= k + 1)
        hi = mid;
      else
        lo = mid;
    }
    out.push_back(0.5 * (lo + hi));
    lo_start = lo;
  }
  return out;
}

namespace detail {

/// Solves (T - shift I) x = b with Gaussian elimination and partial
/// pivoting; `b` is overwritten with x.
inline void shifted_solve(const SymTridiagonal& t, double shift, std::vector<double>& b) {
  const std::size_t m = t.size();
  std::vector<double> dl(t.off), d(m), du(t.off), du2(m, 0.0);
  std::vector<bool> swapped(m, false);
  for (std::size_t i = 0; i < m; ++i) d[i] = t.diag[i] - shift;
  const double guard = std::numeric_limits<double>::epsilon() *
                       std::max(1.0, *std::max_element(t.diag.begin(), t.diag.end(),
                                                       [](double a, double c) { return std::abs(a) < std::abs(c); }));
  for (std::size_t i = 0; i + 1 < m; ++i) {
    if (std::abs(d[i]) >= std::abs(dl[i])) {
      if (d[i] == 0.0) d[i] = guard;
      double f = dl[i] / d[i];
      dl[i] = f;
      d[i + 1] -= f * du[i];
    } else {
      double f = d[i] / dl[i];
      d[i] = dl[i];
      dl[i] = f;
      double tmp = du[i];
      du[i] = d[i + 1];
      d[i + 1] = tmp - f * d[i + 1];
      if (i + 2 < m) {
        du2[i] = du[i + 1];
        du[i + 1] = -f * du[i + 1];
      }
      swapped[i] = true;
    }
  }
  if (d[m - 1] == 0.0) d[m - 1] = guard;
  for (std::size_t i = 0; i + 1 < m; ++i) {
    if (swapped[i]) std::swap(b[i], b[i + 1]);
    b[i + 1] -= dl[i] * b[i];
  }
  b[m - 1] /= d[m - 1];
  if (m > 1) b[m - 2] = (b[m - 2] - du[m - 2] * b[m - 1]) / d[m - 2];
  for (std::size_t i = m - 2; i-- > 0;) b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i];
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace detail

/// Unit-norm eigenvectors for the given (ascending) eigenvalues by
/// inverse iteration, orthogonalized against the earlier vectors.
inline std::vector<std::vector<double>> eigenvectors(const SymTridiagonal& t, const std::vector<double>& values) {
  const std::size_t m = t.size();
  std::vector<std::vector<double>> vecs;
  vecs.reserve(values.size());
  for (double lambda : values) {
    std::vector<double> x(m);
    for (std::size_t i = 0; i < m; ++i) x[i] = 1.0 + 0.01 * std::sin(0.37 * static_cast<double>(i));
    for (int it = 0; it < 4; ++it) {
      detail::shifted_solve(t, lambda, x);
      for (const auto& prev : vecs) {
        double c = detail::dot(prev, x);
        for (std::size_t i = 0; i < m; ++i) x[i] -= c * prev[i];
      }
      double nrm = std::sqrt(detail::dot(x, x));
      if (!(nrm > 0.0) || !std::isfinite(nrm)) throw invalid_input("eigenvectors: inverse iteration broke down");
      for (double& v : x) v /= nrm;
    }
    vecs.push_back(std::move(x));
  }
  return vecs;
}

}  // namespace susyqm::tridiag
