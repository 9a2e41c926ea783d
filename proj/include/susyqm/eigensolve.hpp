#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "susyqm/calculus.hpp"
#include "susyqm/grid.hpp"
#include "susyqm/tridiagonal.hpp"

namespace susyqm {

struct Level {
  double energy;
  SampledFunction psi;
};

/// Lowest Dirichlet eigenpairs, energies strictly increasing. `complete`
/// is false when fewer than `requested` levels lie below the asymptotic
/// threshold (the smaller of the two edge values of the effective potential).
struct Spectrum {
  std::vector<Level> levels;
  std::size_t requested = 0;
  bool complete = true;
  double threshold = std::numeric_limits<double>::infinity();

  std::size_t size() const noexcept { return levels.size(); }
  const Level& operator[](std::size_t i) const { return levels[i]; }
  std::vector<double> energies() const {
    std::vector<double> e;
    for (const auto& l : levels) e.push_back(l.energy);
    return e;
  }
};

namespace detail {

// Working node range: Richardson against the every-other-node subgrid
// needs an even number of intervals.
inline std::size_t working_last(std::size_t n) { return (n - 1) % 2 == 0 ? n - 1 : n - 2; }

// Three-point discretization of -(p u')' - q u = E w u on nodes
// [0, last] taken every `stride` nodes, Dirichlet at both ends, reduced
// to standard symmetric form with w^{-1/2} scaling.
inline tridiag::SymTridiagonal assemble_sl(std::span<const double> p, std::span<const double> q,
                                           std::span<const double> w, double h, std::size_t last,
                                           std::size_t stride) {
  const std::size_t nodes = last / stride + 1;
  const std::size_t m = nodes - 2;
  const double hh = h * static_cast<double>(stride);
  auto at = [stride](std::span<const double> f, std::size_t k) { return f[k * stride]; };
  tridiag::SymTridiagonal t;
  t.diag.resize(m);
  t.off.resize(m - 1);
  for (std::size_t r = 0; r < m; ++r) {
    std::size_t k = r + 1;
    double pl = 0.5 * (at(p, k - 1) + at(p, k));
    double pr = 0.5 * (at(p, k) + at(p, k + 1));
    t.diag[r] = ((pl + pr) / (hh * hh) - at(q, k)) / at(w, k);
    if (r + 1 < m) t.off[r] = -pr / (hh * hh) / std::sqrt(at(w, k) * at(w, k + 1));
  }
  return t;
}

inline void fix_sign(std::vector<double>& v) {
  double mx = 0.0;
  for (double x : v) mx = std::max(mx, std::abs(x));
  for (double x : v)
    if (std::abs(x) > 1e-3 * mx) {
      if (x < 0)
        for (double& y : v) y = -y;
      return;
    }
}

// Shared Richardson driver: E = (4 E_h - E_2h)/3, eigenvectors from the h level.
inline Spectrum richardson_sl(const Grid1D& grid, std::span<const double> p, std::span<const double> q,
                              std::span<const double> w, std::size_t count) {
  const std::size_t n = grid.size();
  const std::size_t last = working_last(n);
  const double h = grid.h();
  Spectrum spec;
  spec.requested = count;
  spec.threshold = std::min(-q[0] / w[0], -q[n - 1] / w[n - 1]);

  auto fine = assemble_sl(p, q, w, h, last, 1);
  auto coarse = assemble_sl(p, q, w, h, last, 2);
  std::size_t want = std::min(count, coarse.size());
  auto ef = tridiag::lowest_eigenvalues(fine, want);
  std::size_t bound = 0;
  while (bound < want && ef[bound] < spec.threshold) ++bound;
  if (bound < count) spec.complete = false;
  if (bound == 0) return spec;
  ef.resize(bound);
  auto ec = tridiag::lowest_eigenvalues(coarse, bound);
  auto vecs = tridiag::eigenvectors(fine, ef);

  for (std::size_t k = 0; k < bound; ++k) {
    std::vector<double> phi(n, 0.0);
    for (std::size_t r = 0; r < vecs[k].size(); ++r) phi[r + 1] = vecs[k][r] / std::sqrt(w[r + 1]);
    fix_sign(phi);
    SampledFunction f(grid, std::move(phi));
    std::vector<double> wf2(n);
    for (std::size_t i = 0; i < n; ++i) wf2[i] = w[i] * f[i] * f[i];
    double nrm = std::sqrt(integrate(SampledFunction(grid, std::move(wf2))));
    spec.levels.push_back({(4.0 * ef[k] - ec[k]) / 3.0, (1.0 / nrm) * f});
  }
  return spec;
}

// Inverse iteration on the five-point (fourth-order) Hamiltonian shifted
// by the extrapolated energy. Rows next to the Dirichlet ends use the
// three-point stencil. Returns interior values, orthogonalized against
// `previous`.
inline std::vector<double> refine_vector(std::span<const double> v, double k, double h, std::size_t last,
                                         double energy, std::vector<double> guess,
                                         const std::vector<std::vector<double>>& previous) {
  const auto m = static_cast<Eigen::Index>(last - 1);
  const double c = k / (12.0 * h * h);
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(static_cast<std::size_t>(m) * 5);
  for (Eigen::Index r = 0; r < m; ++r) {
    const double vr = v[static_cast<std::size_t>(r) + 1] - energy;
    if (r == 0 || r == m - 1) {
      t.emplace_back(r, r, 2.0 * k / (h * h) + vr);
      if (r > 0) t.emplace_back(r, r - 1, -k / (h * h));
      if (r + 1 < m) t.emplace_back(r, r + 1, -k / (h * h));
      continue;
    }
    t.emplace_back(r, r, 30.0 * c + vr);
    t.emplace_back(r, r - 1, -16.0 * c);
    t.emplace_back(r, r + 1, -16.0 * c);
    if (r >= 2) t.emplace_back(r, r - 2, c);
    if (r + 2 < m) t.emplace_back(r, r + 2, c);
  }
  Eigen::SparseMatrix<double> A(m, m);
  A.setFromTriplets(t.begin(), t.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success) return guess;
  Eigen::VectorXd x = Eigen::Map<Eigen::VectorXd>(guess.data(), m);
  for (int it = 0; it < 3; ++it) {
    Eigen::VectorXd y = lu.solve(x);
    if (lu.info() != Eigen::Success || !y.allFinite()) return guess;
    for (const auto& p : previous) {
      Eigen::Map<const Eigen::VectorXd> pv(p.data(), m);
      y -= pv.dot(y) * pv;
    }
    x = y / y.norm();
  }
  if (x.dot(Eigen::Map<Eigen::VectorXd>(guess.data(), m)) < 0) x = -x;
  return {x.data(), x.data() + m};
}

}  // namespace detail

/// Lowest `count` bound states of -κ u'' + V u = E u with Dirichlet ends.
/// Three-point second-order discretization on the grid and on its
/// every-other-node subgrid, eigenvalues combined by Richardson
/// extrapolation (fourth order). Eigenfunctions are refined on the
/// five-point operator and L²-normalized.
inline Spectrum numerov_eigensolve(const SampledFunction& V, std::size_t count, Kinetic kinetic = Kinetic::half) {
  if (count == 0) throw invalid_input("numerov_eigensolve: count must be positive");
  const auto& grid = V.grid();
  const std::size_t n = grid.size();
  const double k = kappa(kinetic);
  const double h = grid.h();
  const std::size_t last = detail::working_last(n);
  auto v = V.values();

  auto assemble = [&](std::size_t stride) {
    const double hh = h * static_cast<double>(stride);
    const std::size_t m = last / stride - 1;
    tridiag::SymTridiagonal t;
    t.diag.resize(m);
    t.off.assign(m - 1, -k / (hh * hh));
    for (std::size_t r = 0; r < m; ++r) t.diag[r] = 2.0 * k / (hh * hh) + v[(r + 1) * stride];
    return t;
  };

  Spectrum spec;
  spec.requested = count;
  spec.threshold = std::min(v[0], v[n - 1]);
  auto fine = assemble(1);
  auto coarse = assemble(2);
  std::size_t want = std::min(count, coarse.size());
  auto ef = tridiag::lowest_eigenvalues(fine, want);
  std::size_t bound = 0;
  while (bound < want && ef[bound] < spec.threshold) ++bound;
  spec.complete = bound == count;
  if (bound == 0) return spec;
  ef.resize(bound);
  auto ec = tridiag::lowest_eigenvalues(coarse, bound);
  auto vecs = tridiag::eigenvectors(fine, ef);
  std::vector<std::vector<double>> refined;
  for (std::size_t i = 0; i < bound; ++i) {
    const double e = (4.0 * ef[i] - ec[i]) / 3.0;
    refined.push_back(detail::refine_vector(v, k, h, last, e, vecs[i], refined));
    std::vector<double> psi(n, 0.0);
    std::copy(refined[i].begin(), refined[i].end(), psi.begin() + 1);
    detail::fix_sign(psi);
    spec.levels.push_back({e, normalized(SampledFunction(grid, std::move(psi)))});
  }
  return spec;
}

/// Lowest `count` eigenpairs of d/dx[p Φ'] + q Φ + w E Φ = 0, Dirichlet
/// ends. Requires p > 0 and w > 0 at every node. Eigenfunctions are
/// w-orthonormal.
inline Spectrum sl_eigensolve(const SampledFunction& p, const SampledFunction& q, const SampledFunction& w,
                              std::size_t count) {
  if (count == 0) throw invalid_input("sl_eigensolve: count must be positive");
  require_same_grid(p, q, "sl_eigensolve");
  require_same_grid(p, w, "sl_eigensolve");
  for (std::size_t i = 0; i < p.size(); ++i)
    if (!(p[i] > 0.0) || !(w[i] > 0.0))
      throw invalid_input("sl_eigensolve: p and w must be positive (fails at x=" + std::to_string(p.x(i)) + ")");
  return detail::richardson_sl(p.grid(), p.values(), q.values(), w.values(), count);
}

/// max over interior nodes of |-κ ψ'' + V ψ - E ψ| / max|ψ|.
inline double schrodinger_residual(const SampledFunction& V, const SampledFunction& psi, double E,
                                   Kinetic kinetic = Kinetic::half) {
  require_same_grid(V, psi, "schrodinger_residual");
  const double scale = psi.max_abs();
  if (!(scale > 0.0)) throw invalid_input("schrodinger_residual: psi is identically zero");
  auto d2 = differentiate(psi, 2);
  const double k = kappa(kinetic);
  double r = 0.0;
  for (std::size_t i = 2; i + 2 < psi.size(); ++i) r = std::max(r, std::abs(-k * d2[i] + (V[i] - E) * psi[i]));
  return r / scale;
}

/// Same measure for the Sturm–Liouville form: max |(pΦ')' + qΦ + wEΦ| / max|Φ|.
inline double sl_residual(const SampledFunction& p, const SampledFunction& q, const SampledFunction& w,
                          const SampledFunction& phi, double E) {
  require_same_grid(p, phi, "sl_residual");
  const double scale = phi.max_abs();
  if (!(scale > 0.0)) throw invalid_input("sl_residual: phi is identically zero");
  auto flux = differentiate(p * differentiate(phi, 1), 1);
  double r = 0.0;
  for (std::size_t i = 3; i + 3 < phi.size(); ++i) r = std::max(r, std::abs(flux[i] + (q[i] + w[i] * E) * phi[i]));
  return r / scale;
}

}  // namespace susyqm
