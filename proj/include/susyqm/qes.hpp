#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "susyqm/calculus.hpp"
#include "susyqm/eigensolve.hpp"
#include "susyqm/grid.hpp"
#include "susyqm/special.hpp"

namespace susyqm::qes {

enum class Parity { even, odd };

inline const char* to_string(Parity p) noexcept { return p == Parity::even ? "even" : "odd"; }

inline Parity parse_parity(const std::string& s) {
  if (s == "even") return Parity::even;
  if (s == "odd") return Parity::odd;
  throw invalid_input("parity must be 'even' or 'odd', got '" + s + "'");
}

/// Rank-N polynomial sector of V₀(sinh⁴x − k sinh²x), kinetic term ½p².
struct QESProblem {
  Parity parity = Parity::even;
  int N = 0;
  double k = 0.0;

  QESProblem() = default;
  QESProblem(Parity p, int n, double kk) : parity(p), N(n), k(kk) {
    if (N < 0) throw invalid_input("QESProblem: N must be non-negative");
    if (!std::isfinite(k) || !(k > -1.0))
      throw invalid_input("QESProblem: k must exceed -1 (alpha and V0 diverge as 1/(1+k) when k -> -1)");
  }

  double alpha() const noexcept { return (parity == Parity::even ? 4.0 * N + 2.0 : 4.0 * (N + 1.0)) / (1.0 + k); }
  /// The Gaussian-type factor e^{-αβ/2} cancels the β² term only for V₀ = α²/2.
  double V0() const noexcept { return 0.5 * alpha() * alpha(); }
  /// Level index in the full spectrum of the i-th QES energy.
  int slot(int i) const noexcept { return parity == Parity::even ? 2 * i : 2 * i + 1; }
};

inline SampledFunction qes_potential(const Grid1D& grid, double V0, double k) {
  return SampledFunction::sample(grid, [=](double x) {
    const double s2 = std::sinh(x) * std::sinh(x);
    return V0 * (s2 * s2 - k * s2);
  });
}

/// Symmetric box [-L, L] on which V exceeds `ceiling` at the walls
/// (at least |x| = 2), 4001 nodes. With `alpha` > 0 the wall also needs
/// e^{−α cosh²L/2} cosh^{2(N+1)}L below e^{−30}.
inline Grid1D confining_grid(double V0, double k, double ceiling, double alpha = 0.0, int N = 0) {
  double L = 2.0;
  while (L < 12.0) {
    const double s2 = std::sinh(L) * std::sinh(L);
    const double c2 = 1.0 + s2;
    const bool decayed = alpha <= 0.0 || 0.5 * alpha * c2 - (N + 1.0) * std::log(c2) >= 30.0;
    if (V0 * (s2 * s2 - k * s2) >= ceiling && decayed) break;
    L += 0.05;
  }
  return {-L, L, 4001};
}

/// Analytic QES output. Level i has energy energies[i], coefficients
/// f(β) = Σ_j c_j β^j (c_0 = 1), polynomial roots, and its sampled,
/// normalized eigenfunction.
struct QESSolution {
  QESProblem problem;
  double alpha = 0.0;
  double V0 = 0.0;
  std::vector<double> energies;
  std::vector<int> slots;
  std::vector<std::vector<double>> coefficients;
  std::vector<std::vector<std::complex<double>>> roots;
  std::vector<double> sum_rule_residuals;
  std::vector<SampledFunction> psi;
  SampledFunction potential;
  double max_imaginary = 0.0;  // largest |Im| among recurrence eigenvalues
  double min_separation = 0.0;
};

/// Coefficient-recurrence matrix M with E = 2·eig(M), acting on (c_0..c_N).
inline Eigen::MatrixXd recurrence_matrix(const QESProblem& p) {
  const int N = p.N;
  const double a = p.alpha();
  const bool odd = p.parity == Parity::odd;
  const double c0 = a / 4.0 - a * a * (1.0 + p.k) / 4.0 + (odd ? 0.25 : 0.0);
  const double lin = odd ? a + 2.0 : a + 1.0;
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(N + 1, N + 1);
  for (int j = 0; j <= N; ++j) {
    M(j, j) = -(j * (j - 1.0) + lin * j + c0);
    if (j > 0) M(j, j - 1) = -a * (N - j + 1);
    if (j < N) M(j, j + 1) = (j + 1.0) * (j + 0.5);
  }
  return M;
}

namespace detail {

inline std::complex<double> horner(const std::vector<double>& c, std::complex<double> z) {
  std::complex<double> v = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * z + *it;
  return v;
}

inline std::complex<double> horner_d(const std::vector<double>& c, std::complex<double> z) {
  std::complex<double> v = 0.0;
  for (std::size_t j = c.size() - 1; j >= 1; --j) v = v * z + static_cast<double>(j) * c[j];
  return v;
}

}  // namespace detail

/// Roots of Σ_j c_j z^j from the companion matrix, polished by Newton steps.
inline std::vector<std::complex<double>> polynomial_roots(const std::vector<double>& c) {
  std::size_t deg = c.size() - 1;
  while (deg > 0 && c[deg] == 0.0) --deg;
  if (deg == 0) return {};
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(deg), static_cast<Eigen::Index>(deg));
  for (std::size_t i = 1; i < deg; ++i) C(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
  for (std::size_t i = 0; i < deg; ++i) C(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(deg - 1)) = -c[i] / c[deg];
  Eigen::EigenSolver<Eigen::MatrixXd> es(C, false);
  std::vector<double> cc(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(deg) + 1);
  std::vector<std::complex<double>> r;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    std::complex<double> z = es.eigenvalues()[i];
    for (int it = 0; it < 4; ++it) {
      auto d = detail::horner_d(cc, z);
      if (std::abs(d) == 0.0) break;
      z -= detail::horner(cc, z) / d;
    }
    r.push_back(z);
  }
  std::sort(r.begin(), r.end(), [](auto x, auto y) { return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag(); });
  return r;
}

/// Energy from the root sum: ½[α²(1+k) + α(4Σβ − 1 − 4N) − 4N²], with an
/// extra −4N − 1 inside the bracket for the odd sector.
inline double sum_rule_energy(const QESProblem& p, const std::vector<std::complex<double>>& roots) {
  std::complex<double> s = 0.0;
  for (auto r : roots) s += r;
  const double a = p.alpha();
  const int N = p.N;
  double b = a * a * (1.0 + p.k) + a * (4.0 * s.real() - 1.0 - 4.0 * N) - 4.0 * N * N;
  if (p.parity == Parity::odd) b += -4.0 * N - 1.0;
  return 0.5 * b;
}

inline SampledFunction qes_eigenfunction(const QESProblem& p, const std::vector<double>& c, const Grid1D& grid) {
  const double a = p.alpha();
  const bool odd = p.parity == Parity::odd;
  auto f = SampledFunction::sample(grid, [&](double x) {
    const double b = std::cosh(x) * std::cosh(x);
    double poly = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) poly = poly * b + *it;
    return (odd ? std::sinh(x) : 1.0) * std::exp(-0.5 * a * b) * poly;
  });
  auto n = normalized(f);
  // Sign convention: positive just right of the origin.
  const std::size_t i0 = grid.nearest(0.0) + 1 < grid.size() ? grid.nearest(0.0) + 1 : grid.nearest(0.0);
  return n[i0] < 0 ? -1.0 * n : n;
}

/// Solves the QES sector: energies from the recurrence matrix, coefficient
/// vectors from the null space of M − λ at each energy, polynomial roots,
/// sum-rule post-check, and sampled eigenfunctions on `grid` (an automatic
/// confining box when omitted).
inline QESSolution qes_solve(const QESProblem& p, std::optional<Grid1D> grid = std::nullopt) {
  QESProblem checked(p.parity, p.N, p.k);
  auto M = recurrence_matrix(checked);
  Eigen::EigenSolver<Eigen::MatrixXd> es(M, false);
  std::vector<std::complex<double>> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(ev.begin(), ev.end(), [](auto x, auto y) { return x.real() < y.real(); });

  const int N = checked.N;
  const double scale = 1.0 + M.cwiseAbs().maxCoeff();
  double max_im = 0.0, min_sep = INFINITY;
  for (std::size_t i = 0; i < ev.size(); ++i) {
    max_im = std::max(max_im, std::abs(ev[i].imag()));
    if (i) min_sep = std::min(min_sep, ev[i].real() - ev[i - 1].real());
  }
  if (max_im > 1e-9 * scale || min_sep < 1e-9 * scale)
    throw invalid_input("qes_solve: recurrence matrix is defective or has complex spectrum (max |Im| = " +
                        std::to_string(max_im) + ")");

  Grid1D g = grid ? *grid : confining_grid(checked.V0(), checked.k, std::max(0.0, 2.0 * ev.back().real()) + 500.0,
                                            checked.alpha(), N);
  QESSolution s{checked, checked.alpha(), checked.V0(), {}, {}, {}, {}, {}, {},
                qes_potential(g, checked.V0(), checked.k), max_im, min_sep};

  for (std::size_t i = 0; i < ev.size(); ++i) {
    const double lam = ev[i].real();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M - lam * Eigen::MatrixXd::Identity(N + 1, N + 1), Eigen::ComputeFullV);
    Eigen::VectorXd v = svd.matrixV().col(N);
    if (std::abs(v(0)) < 1e-12 * v.cwiseAbs().maxCoeff())
      throw invalid_input("qes_solve: eigenvector with vanishing constant coefficient");
    std::vector<double> c(v.data(), v.data() + N + 1);
    for (double& x : c) x /= v(0);
    s.energies.push_back(2.0 * lam);
    s.slots.push_back(checked.slot(static_cast<int>(i)));
    s.roots.push_back(polynomial_roots(c));
    s.sum_rule_residuals.push_back(std::abs(sum_rule_energy(checked, s.roots.back()) - 2.0 * lam));
    s.coefficients.push_back(std::move(c));
  }

  for (const auto& c : s.coefficients) s.psi.push_back(qes_eigenfunction(checked, c, g));
  return s;
}

/// max_i |Σ_{j≠i} 2/(β_i − β_j) + P(β_i)/(β_i² − β_i)| with
/// P(β) = −αβ² + (α+1)β − ½ (even) or −αβ² + (α+2)β − ½ (odd).
inline double bethe_root_residual(const QESProblem& p, const std::vector<std::complex<double>>& roots) {
  const double a = p.alpha();
  const double lin = p.parity == Parity::even ? a + 1.0 : a + 2.0;
  double worst = 0.0;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    std::complex<double> s = 0.0;
    for (std::size_t j = 0; j < roots.size(); ++j) {
      if (j == i) continue;
      if (std::abs(roots[i] - roots[j]) < 1e-12 * (1.0 + std::abs(roots[i])))
        throw invalid_input("bethe_root_residual: repeated roots, residual undefined");
      s += 2.0 / (roots[i] - roots[j]);
    }
    const auto b = roots[i];
    s += (-a * b * b + lin * b - 0.5) / (b * b - b);
    worst = std::max(worst, std::abs(s));
  }
  return worst;
}

inline double bethe_root_residual(const QESSolution& sol, std::size_t level) {
  if (level >= sol.roots.size()) throw invalid_input("bethe_root_residual: level out of range");
  return bethe_root_residual(sol.problem, sol.roots[level]);
}

/// E± = [9 − (1+k) ± √((1+k)² + 36)]/(1+k), the even N = 1 pair.
inline std::pair<double, double> closed_form_N1(double k) {
  if (!(k > -1.0)) throw invalid_input("closed_form_N1: k must exceed -1");
  const double q = 1.0 + k;
  const double r = std::sqrt(q * q + 36.0);
  return {(9.0 - q - r) / q, (9.0 - q + r) / q};
}

/// Three-term recursion P̂_{j+1} = (E_R − b_j)P̂_j − a_j P̂_{j−1} for the
/// hyperbolic Razavy potential ½(ζ cosh 2x − M)², E_R = 2E.
struct RazavyRecursion {
  double zeta = 1.0;
  int n = 0;
  int sigma = 1;
  int eta = 0;

  RazavyRecursion() = default;
  RazavyRecursion(double z, int nn, int s, int e) : zeta(z), n(nn), sigma(s), eta(e) {
    const bool ok = (std::abs(s) == 1 && e == 0) || (s == 0 && std::abs(e) == 1);
    if (!ok) throw invalid_input("RazavyRecursion: (sigma, eta) must be (+-1, 0) or (0, +-1)");
    if (n < 0) throw invalid_input("RazavyRecursion: n must be non-negative");
    if (!std::isfinite(z)) throw invalid_input("RazavyRecursion: zeta must be finite");
  }

  double a(int j) const noexcept { return 16.0 * zeta * j * (2.0 * j - sigma + eta) * (j - n - 1.0); }
  double b(int j) const noexcept {
    return -4.0 * j * (j + 1.0 - sigma + 2.0 * zeta) + (2.0 * n + 1.0) * (2.0 * (n - sigma) + 3.0) +
           zeta * (zeta - 2.0 * eta + 4.0 * n);
  }
  /// Integer M of ½(ζ cosh 2x − M)² matched by the Finkel ansatz.
  int M() const noexcept { return 2 * n + 2 - sigma; }

  /// P̂_0 .. P̂_{n} evaluated at E_R.
  std::vector<double> polynomials(double E_R) const {
    std::vector<double> P{1.0};
    double prev = 0.0;
    for (int j = 0; j < n; ++j) {
      double next = (E_R - b(j)) * P.back() - a(j) * prev;
      prev = P.back();
      P.push_back(next);
    }
    return P;
  }
};

/// The n+1 roots E_R of P̂_{n+1}, ascending. Throws if any root has an
/// imaginary part beyond tolerance.
inline std::vector<double> razavy_recursion_eigen(const RazavyRecursion& r) {
  const int n = r.n;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n + 1, n + 1);
  for (int j = 0; j <= n; ++j) {
    J(j, j) = r.b(j);
    if (j > 0) {
      J(j, j - 1) = r.a(j);
      J(j - 1, j) = 1.0;
    }
  }
  Eigen::EigenSolver<Eigen::MatrixXd> es(J, false);
  std::vector<double> out;
  const double scale = 1.0 + J.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    auto z = es.eigenvalues()[i];
    if (std::abs(z.imag()) > 1e-9 * scale)
      throw invalid_input("razavy_recursion_eigen: complex root " + std::to_string(z.real()) + " + " +
                          std::to_string(z.imag()) + "i");
    out.push_back(z.real());
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline SampledFunction razavy_potential(const Grid1D& grid, double zeta, double M) {
  return SampledFunction::sample(grid, [=](double x) {
    const double t = zeta * std::cosh(2.0 * x) - M;
    return 0.5 * t * t;
  });
}

/// ψ ∝ sinh^{(1−σ−η)/2} cosh^{(1−σ+η)/2} e^{−(ζ/2)cosh 2x} Σ_j P̂_j(E_R) cosh^{2j}/Γ(2j + (η−σ+1)/2 + 1), normalized.
inline SampledFunction finkel_eigenfunction(const RazavyRecursion& r, double E_R, const Grid1D& grid) {
  const auto P = r.polynomials(E_R);
  const double ps = 0.5 * (1 - r.sigma - r.eta);
  const double pc = 0.5 * (1 - r.sigma + r.eta);
  std::vector<double> w(P.size());
  for (std::size_t j = 0; j < P.size(); ++j)
    w[j] = P[j] / special::gamma(2.0 * j + 0.5 * (r.eta - r.sigma + 1) + 1.0);
  auto f = SampledFunction::sample(grid, [&](double x) {
    const double c = std::cosh(x);
    double sum = 0.0;
    for (auto it = w.rbegin(); it != w.rend(); ++it) sum = sum * c * c + *it;
    const double s = std::sinh(x);
    const double pref = (ps == 0.0 ? 1.0 : std::pow(s, ps)) * (pc == 0.0 ? 1.0 : std::pow(c, pc));
    return pref * std::exp(-0.5 * r.zeta * std::cosh(2.0 * x)) * sum;
  });
  auto n = normalized(f);
  const std::size_t i0 = std::min(grid.nearest(0.0) + 1, grid.size() - 1);
  return n[i0] < 0 ? -1.0 * n : n;
}

/// Razavy parameters describing the same potential as a QES sector:
/// even → (σ,η) = (1,0), odd → (0,−1), n = N, ζ = α/2.
struct RazavyMap {
  RazavyRecursion recursion;
  double offset;  // E_QES = E_R/2 − offset, offset = (ζ − M)²/2
};

inline RazavyMap razavy_from_qes(const QESProblem& p) {
  QESProblem q(p.parity, p.N, p.k);
  RazavyRecursion r(q.alpha() / 2.0, q.N, q.parity == Parity::even ? 1 : 0, q.parity == Parity::even ? 0 : -1);
  const double d = r.zeta - r.M();
  return {r, 0.5 * d * d};
}

/// V = (α²/2)cosh²x − (3α/2)cosh x + α/cosh x with ground state
/// e^{−α cosh x} cosh x at E = (α² − 1)/2 (kinetic term ½p²).
struct UnclassifiedGround {
  SampledFunction V;
  SampledFunction psi;
  double E;
};

inline Grid1D unclassified_grid(double alpha) {
  const double L = std::clamp(std::acosh(std::max(1.0, 60.0 / alpha)), 3.0, 12.0);
  return {-L, L, 3001};
}

inline UnclassifiedGround unclassified_groundstate(double alpha, std::optional<Grid1D> grid = std::nullopt) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw invalid_input("unclassified_groundstate: alpha must be positive");
  Grid1D g = grid ? *grid : unclassified_grid(alpha);
  auto V = SampledFunction::sample(g, [=](double x) {
    const double c = std::cosh(x);
    return 0.5 * alpha * alpha * c * c - 1.5 * alpha * c + alpha / c;
  });
  auto psi = normalized(SampledFunction::sample(g, [=](double x) { return std::exp(-alpha * std::cosh(x)) * std::cosh(x); }));
  return {std::move(V), std::move(psi), 0.5 * (alpha * alpha - 1.0)};
}

/// One row of the k → −1 diagnostic.
struct DivergenceRow {
  double k;
  double V0;
  double E0;
  double E0_scaled;   // E₀·(1+k)
  double V0_scaled;   // V₀·(1+k)²
};

inline std::vector<DivergenceRow> divergence_profile(Parity parity, int N, const std::vector<double>& k_values) {
  std::vector<DivergenceRow> rows;
  for (double k : k_values) {
    QESProblem p(parity, N, k);
    auto M = recurrence_matrix(p);
    Eigen::EigenSolver<Eigen::MatrixXd> es(M, false);
    double lo = INFINITY;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) lo = std::min(lo, es.eigenvalues()[i].real());
    const double E0 = 2.0 * lo;
    rows.push_back({k, p.V0(), E0, E0 * (1.0 + k), p.V0() * (1.0 + k) * (1.0 + k)});
  }
  return rows;
}

/// Lowest pair of V₀(sinh⁴x − k sinh²x) from the grid eigensolver and
/// their relative splitting (E₁ − E₀)/|E₀|.
struct DoubletGap {
  double E0;
  double E1;
  double gap;
};

inline DoubletGap doublet_gap(double V0, double k, std::optional<Grid1D> grid = std::nullopt) {
  if (!(V0 > 0.0)) throw invalid_input("doublet_gap: V0 must be positive");
  Grid1D g = grid ? *grid : confining_grid(V0, k, 500.0 + V0 * k * k / 4.0);
  auto spec = numerov_eigensolve(qes_potential(g, V0, k), 2);
  if (spec.size() < 2) throw invalid_input("doublet_gap: fewer than two bound states on the grid");
  return {spec[0].energy, spec[1].energy, (spec[1].energy - spec[0].energy) / std::abs(spec[0].energy)};
}

/// Grid-eigensolver energies at the slots of every QES level.
inline std::vector<double> oracle_slot_energies(const QESSolution& sol) {
  const auto count = static_cast<std::size_t>(sol.slots.back()) + 1;
  auto spec = numerov_eigensolve(sol.potential, count);
  if (spec.size() < count) throw invalid_input("oracle_slot_energies: grid spectrum incomplete");
  std::vector<double> out;
  for (int s : sol.slots) out.push_back(spec[static_cast<std::size_t>(s)].energy);
  return out;
}

}  // namespace susyqm::qes
