#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "susyqm/calculus.hpp"
#include "susyqm/eigensolve.hpp"
#include "susyqm/grid.hpp"
#include "susyqm/special.hpp"

namespace susyqm::pt {

/// Modified Pöschl-Teller well -α² m(m+1) sech²(αx) with ε_m = α²m².
struct PTParams {
  double alpha = 1.0;
  int m = 1;

  PTParams() = default;
  PTParams(double a, int mm) : alpha(a), m(mm) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw invalid_input("PTParams: alpha must be positive");
    if (m < 1) throw invalid_input("PTParams: m must be at least 1");
  }

  double epsilon(int index) const noexcept { return alpha * alpha * index * index; }
  double epsilon() const noexcept { return epsilon(m); }
};

/// Lowest |E| bound-state energies -α²(index-n)², n = 0..index-1.
inline std::vector<double> pt_spectrum(double alpha, int index) {
  std::vector<double> e;
  for (int n = 0; n < index; ++n) e.push_back(-alpha * alpha * (index - n) * (index - n));
  return e;
}

inline SampledFunction pt_potential(const Grid1D& grid, double alpha, double strength) {
  return SampledFunction::sample(grid, [=](double x) {
    double s = 1.0 / std::cosh(alpha * x);
    return -alpha * alpha * strength * s * s;
  });
}

/// ∫₀ˣ sech^{2j}(αy) dy in closed form: with t = tanh αx,
/// (1/α) Σ_k C(j-1,k) (-1)^k t^{2k+1}/(2k+1).
inline double sech_power_integral(double x, double alpha, int j) {
  const double t = std::tanh(alpha * x);
  double sum = 0.0, binom = 1.0, tp = t;
  for (int k = 0; k < j; ++k) {
    sum += (k % 2 ? -1.0 : 1.0) * binom * tp / (2 * k + 1);
    binom = binom * (j - 1 - k) / (k + 1);
    tp *= t * t;
  }
  return sum / alpha;
}

/// 2αΓ(index+½)/(√π Γ(index)) = 1/∫₀^∞ sech^{2 index}(αy) dy.
inline double sech_bound(double alpha, int index) {
  return 2.0 * alpha * special::gamma(index + 0.5) / (std::sqrt(std::numbers::pi) * special::gamma(double(index)));
}

/// Admissible |γ₁| for the operators of index m+1.
inline double gamma1_bound(const PTParams& p) { return sech_bound(p.alpha, p.m + 1); }

/// Normalized ground state √(αΓ(ℓ+½)/(√πΓ(ℓ))) sech^ℓ(αx) of the well ℓ(ℓ+1).
inline SampledFunction ih_ground(int l, double alpha, const Grid1D& grid = Grid1D::standard()) {
  if (l < 1) throw invalid_input("ih_ground: l must be at least 1");
  if (!(alpha > 0.0)) throw invalid_input("ih_ground: alpha must be positive");
  const double c = std::sqrt(alpha * special::gamma(l + 0.5) / (std::sqrt(std::numbers::pi) * special::gamma(double(l))));
  return SampledFunction::sample(grid, [=](double x) { return c * std::pow(1.0 / std::cosh(alpha * x), l); });
}

/// ψ^{s+1} = A⁻_{s+1} ψ^s with A⁻_{s+1} = α(s+1) tanh αx − d/dx, renormalized.
inline SampledFunction ih_raise(const SampledFunction& psi, int s, double alpha) {
  if (s < 1) throw invalid_input("ih_raise: s must be at least 1");
  auto d = differentiate(psi, 1);
  auto raised = psi.map([&, i = std::size_t{0}](double x, double v) mutable {
    return alpha * (s + 1) * std::tanh(alpha * x) * v - d[i++];
  });
  return normalized(raised);
}

/// Deformation data of index j: S = γ₁ sech^{2j}/D, D = 1 + γ₁∫₀ˣ sech^{2j},
/// η = (1 + γ₂ sech^{2j}/D²)^{-1/2}, β = (αj tanh + S) η.
struct Deformation {
  int index = 0;
  double alpha = 1.0, gamma1 = 0.0, gamma2 = 0.0;
  bool valid = false;
  std::string failure;             // empty when valid
  std::optional<double> failure_x;  // first offending node
  std::vector<double> D, S, eta, beta;
};

inline Deformation deform(const Grid1D& grid, double alpha, int j, double gamma1, double gamma2) {
  Deformation d;
  d.index = j;
  d.alpha = alpha;
  d.gamma1 = gamma1;
  d.gamma2 = gamma2;
  const std::size_t n = grid.size();
  d.D.resize(n);
  d.S.resize(n);
  d.eta.resize(n);
  d.beta.resize(n);
  if (!std::isfinite(gamma1) || !std::isfinite(gamma2)) {
    d.failure = "non-finite parameters";
    return d;
  }
  if (std::abs(gamma1) >= sech_bound(alpha, j)) {
    d.failure = "|gamma1| = " + std::to_string(std::abs(gamma1)) + " is not below the bound " +
                std::to_string(sech_bound(alpha, j));
    return d;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double x = grid.x(i);
    const double s2j = std::pow(1.0 / std::cosh(alpha * x), 2 * j);
    const double D = 1.0 + gamma1 * sech_power_integral(x, alpha, j);
    if (!(D > 0.0)) {
      d.failure = "1 + gamma1*I vanishes";
      d.failure_x = x;
      return d;
    }
    const double arg = 1.0 + gamma2 * s2j / (D * D);
    if (!(arg > 0.0) || !std::isfinite(arg)) {
      d.failure = "eta is not real and positive";
      d.failure_x = x;
      return d;
    }
    d.D[i] = D;
    d.S[i] = gamma1 * s2j / D;
    d.eta[i] = 1.0 / std::sqrt(arg);
    d.beta[i] = (alpha * j * std::tanh(alpha * x) + d.S[i]) * d.eta[i];
  }
  d.valid = true;
  return d;
}

/// Two-parameter factorization B_{m+1} = η⁻¹ d/dx + β, B*_{m+1} = −η d/dx + β
/// with B B* = −d² − α²m(m+1) sech² + ε_{m+1}.
struct TwoParamFactorization {
  PTParams params;
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  bool valid = false;
  std::string failure;
  std::optional<double> failure_x;
  SampledFunction eta;
  SampledFunction beta;
  SampledFunction S;
  // Sufficient γ₂ condition γ₂ > −1 + γ₁², with raw and bound-normalized γ₁ (metadata only).
  bool gamma2_condition_raw = false;
  bool gamma2_condition_normalized = false;
};

inline TwoParamFactorization build_factorization(const PTParams& params, double gamma1, double gamma2,
                                                 const Grid1D& grid = Grid1D::standard()) {
  auto d = deform(grid, params.alpha, params.m + 1, gamma1, gamma2);
  TwoParamFactorization f{params, gamma1, gamma2, d.valid, d.failure, d.failure_x,
                          SampledFunction(grid), SampledFunction(grid), SampledFunction(grid)};
  if (d.valid) {
    f.eta = SampledFunction(grid, d.eta);
    f.beta = SampledFunction(grid, d.beta);
    f.S = SampledFunction(grid, d.S);
  }
  const double g1n = gamma1 / gamma1_bound(params);
  f.gamma2_condition_raw = gamma2 > -1.0 + gamma1 * gamma1;
  f.gamma2_condition_normalized = gamma2 > -1.0 + g1n * g1n;
  return f;
}

namespace detail {
inline void require_valid(const TwoParamFactorization& f, const char* where) {
  if (!f.valid) throw invalid_input(std::string(where) + ": factorization is not admissible (" + f.failure + ")");
}
inline double interior_sup(const std::vector<double>& r, std::size_t skip) {
  double m = 0.0;
  for (std::size_t i = skip; i + skip < r.size(); ++i) m = std::max(m, std::abs(r[i]));
  return m;
}
}  // namespace detail

/// max over f of ‖(B B* − H − ε) f‖∞ / ‖f‖∞ on interior nodes.
inline double factorization_residual(const TwoParamFactorization& fact, const std::vector<SampledFunction>& testfns) {
  detail::require_valid(fact, "factorization_residual");
  const double a = fact.params.alpha;
  const int m = fact.params.m;
  const double eps = fact.params.epsilon(m + 1);
  double worst = 0.0;
  for (const auto& f : testfns) {
    require_same_grid(f, fact.eta, "factorization_residual");
    auto bstar = combine(fact.beta, f, std::multiplies<>{}) - fact.eta * differentiate(f, 1);
    auto dbs = differentiate(bstar, 1);
    auto d2 = differentiate(f, 2);
    std::vector<double> r(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double s = 1.0 / std::cosh(a * f.x(i));
      const double bb = dbs[i] / fact.eta[i] + fact.beta[i] * bstar[i];
      const double h = -d2[i] + (-a * a * m * (m + 1) * s * s + eps) * f[i];
      r[i] = bb - h;
    }
    worst = std::max(worst, detail::interior_sup(r, 3) / f.max_abs());
  }
  return worst;
}

/// Interior sup-norms of the two coupled equations
/// −η'/η + β/η − βη = 0 and β'/η + β² = −α²m(m+1)sech² + ε_{m+1}.
inline std::pair<double, double> coupled_residuals(const TwoParamFactorization& fact) {
  detail::require_valid(fact, "coupled_residuals");
  const double a = fact.params.alpha;
  const int m = fact.params.m;
  auto de = differentiate_fine(fact.eta);
  auto db = differentiate_fine(fact.beta);
  std::vector<double> r1(fact.eta.size()), r2(fact.eta.size());
  for (std::size_t i = 0; i < r1.size(); ++i) {
    const double e = fact.eta[i], b = fact.beta[i];
    const double s = 1.0 / std::cosh(a * fact.eta.x(i));
    r1[i] = -de[i] / e + b / e - b * e;
    r2[i] = db[i] / e + b * b - (-a * a * m * (m + 1) * s * s + fact.params.epsilon(m + 1));
  }
  return {detail::interior_sup(r1, 3), detail::interior_sup(r2, 3)};
}

/// Interior sup-norm of (β/η)' + (β/η)² + α²m(m+1)sech² − ε_{m+1}.
inline double riccati_residual(const TwoParamFactorization& fact) {
  detail::require_valid(fact, "riccati_residual");
  auto w = combine(fact.beta, fact.eta, std::divides<>{});
  auto dw = differentiate_fine(w);
  const double a = fact.params.alpha;
  const int m = fact.params.m;
  std::vector<double> r(w.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double s = 1.0 / std::cosh(a * w.x(i));
    r[i] = dw[i] + w[i] * w[i] + a * a * m * (m + 1) * s * s - fact.params.epsilon(m + 1);
  }
  return detail::interior_sup(r, 3);
}

/// d/dx[p Φ'] + q Φ + w E Φ = 0 built from the index-m operators:
/// p = w = η_m⁻², q = (ε_m − β_m²)(1 + η_m⁻²) − α²m(m−1) sech².
struct SLProblem {
  PTParams params;
  double gamma1 = 0.0, gamma2 = 0.0;
  SampledFunction p, q, w;
  SampledFunction eta_m, D_m;
  std::vector<double> expected;  // −α²(m−n)²
};

inline SLProblem build_sl_problem(const TwoParamFactorization& fact) {
  detail::require_valid(fact, "build_sl_problem");
  const auto& grid = fact.eta.grid();
  const double a = fact.params.alpha;
  const int m = fact.params.m;
  auto d = deform(grid, a, m, fact.gamma1, fact.gamma2);
  if (!d.valid) throw invalid_input("build_sl_problem: index-m deformation not admissible (" + d.failure + ")");
  std::vector<double> p(grid.size()), q(grid.size());
  const double eps = fact.params.epsilon(m);
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double s = 1.0 / std::cosh(a * grid.x(i));
    const double ie2 = 1.0 / (d.eta[i] * d.eta[i]);
    p[i] = ie2;
    q[i] = (eps - d.beta[i] * d.beta[i]) * (1.0 + ie2) - a * a * m * (m - 1) * s * s;
  }
  SampledFunction P(grid, p);
  return {fact.params, fact.gamma1,    fact.gamma2,         P, SampledFunction(grid, std::move(q)), P,
          SampledFunction(grid, d.eta), SampledFunction(grid, d.D), pt_spectrum(a, m)};
}

inline Spectrum solve_sl(const SLProblem& sl, std::size_t count) { return sl_eigensolve(sl.p, sl.q, sl.w, count); }

/// Zero mode Φ₀ = η_m sech^m(αx)/(1 + γ₁∫₀ˣ sech^{2m}) with E₀ = −α²m²,
/// normalized in the weight η_m⁻².
inline SampledFunction sl_ground(const SLProblem& sl) {
  const double a = sl.params.alpha;
  const int m = sl.params.m;
  auto phi = sl.eta_m.map([&, i = std::size_t{0}](double x, double e) mutable {
    return e * std::pow(1.0 / std::cosh(a * x), m) / sl.D_m[i++];
  });
  const double n2 = integrate(sl.w * phi * phi);
  return (1.0 / std::sqrt(n2)) * phi;
}

inline SampledFunction sl_ground(const TwoParamFactorization& fact) { return sl_ground(build_sl_problem(fact)); }

/// γ₂ = 0 partner: Ṽ = −α²λ(λ+1)sech² + 2S₁² + 4αλ tanh S₁ (λ = m+1) and
/// its ground state φ₀ = sech^λ/(1 + γ₁∫₀ˣ sech^{2λ}) at E = −α²λ² (normalized).
struct SusyPartner {
  SampledFunction V_tilde;
  SampledFunction phi0;
  double energy;
};

inline SusyPartner susy_partner(double gamma1, const PTParams& params, const Grid1D& grid = Grid1D::standard()) {
  const double a = params.alpha;
  const int lam = params.m + 1;
  auto d = deform(grid, a, lam, gamma1, 0.0);
  if (!d.valid) throw invalid_input("susy_partner: " + d.failure);
  std::vector<double> v(grid.size()), phi(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double x = grid.x(i);
    const double s = 1.0 / std::cosh(a * x);
    v[i] = -a * a * lam * (lam + 1) * s * s + 2.0 * d.S[i] * d.S[i] + 4.0 * a * lam * std::tanh(a * x) * d.S[i];
    phi[i] = std::pow(s, lam) / d.D[i];
  }
  return {SampledFunction(grid, std::move(v)), normalized(SampledFunction(grid, std::move(phi))),
          -a * a * lam * lam};
}

}  // namespace susyqm::pt
