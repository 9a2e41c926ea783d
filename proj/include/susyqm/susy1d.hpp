#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "susyqm/calculus.hpp"
#include "susyqm/eigensolve.hpp"
#include "susyqm/grid.hpp"

namespace susyqm::susy1d {

/// Superpotential and the two partner potentials V∓ = κ(W² ∓ W').
struct PartnerPair {
  SampledFunction W;
  SampledFunction V_plus;
  SampledFunction V_minus;
};

/// One member of the λ-family of potentials isospectral to a seed.
/// V_plus is the seed potential rebuilt from its superpotential on the
/// seed's own energy scale, κ(W² − W') + E; V_hat and u_hat share E.
struct IsospectralFamily {
  double lambda;
  double energy;
  Kinetic kinetic;
  double g;                 // amplitude of u_hat, √(λ(λ + ∫u²))
  SampledFunction u;        // seed state
  SampledFunction I;        // ∫_{x_min}^x u²
  SampledFunction W;
  SampledFunction W_hat;
  SampledFunction V_plus;
  SampledFunction V_hat;
  SampledFunction u_hat;
};

/// W = −u'/u, computed as −(ln u)'. u must be positive on interior nodes;
/// non-positive edge values (Dirichlet zeros, underflow) are replaced by
/// cubic extrapolation of ln u.
inline SampledFunction superpotential_from_state(const SampledFunction& u) {
  const std::size_t n = u.size();
  std::vector<double> lg(n);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (!(u[i] > 0.0))
      throw invalid_input("superpotential_from_state: state vanishes or changes sign at x=" +
                          std::to_string(u.x(i)) + " (node-free seed required)");
    lg[i] = std::log(u[i]);
  }
  lg[0] = u[0] > 0.0 ? std::log(u[0]) : 4.0 * lg[1] - 6.0 * lg[2] + 4.0 * lg[3] - lg[4];
  lg[n - 1] = u[n - 1] > 0.0 ? std::log(u[n - 1])
                             : 4.0 * lg[n - 2] - 6.0 * lg[n - 3] + 4.0 * lg[n - 4] - lg[n - 5];
  return -1.0 * differentiate(SampledFunction(u.grid(), std::move(lg)), 1);
}

inline PartnerPair partner_potentials(const SampledFunction& W, Kinetic kinetic = Kinetic::half) {
  const double k = kappa(kinetic);
  auto dW = differentiate(W, 1);
  auto W2 = W * W;
  return {W, k * (W2 - dW), k * (W2 + dW)};
}

/// max over interior nodes of |κ(W² − W') − (V − E)|.
inline double riccati_residual(const SampledFunction& W, const SampledFunction& V, double E,
                               Kinetic kinetic = Kinetic::half) {
  require_same_grid(W, V, "riccati_residual");
  auto pair = partner_potentials(W, kinetic);
  double r = 0.0;
  for (std::size_t i = 2; i + 2 < W.size(); ++i) r = std::max(r, std::abs(pair.V_plus[i] - (V[i] - E)));
  return r;
}

/// Darboux deformation of an arbitrary (not necessarily normalized)
/// node-free state u of −κu'' + Vu = Eu: Ŵ = W + u²/(λ+I),
/// V̂ = V − 2κ (u²/(λ+I))', û = g u/(λ+I). λ must avoid [−∫u², 0].
/// When `seed_potential` is given it is used as V_plus in place of the
/// reconstruction κ(W² − W') + E.
inline IsospectralFamily darboux_family(const SampledFunction& u, double lambda, double energy = 0.0,
                                        Kinetic kinetic = Kinetic::half,
                                        const SampledFunction* seed_potential = nullptr) {
  auto I = integrate_cumulative(u * u);
  const double total = I.values().back();
  if (lambda >= -total && lambda <= 0.0)
    throw invalid_input("isospectral family: lambda in [-" + std::to_string(total) +
                        ", 0] makes lambda + I vanish on the grid");
  const double k = kappa(kinetic);
  auto W = superpotential_from_state(u);
  auto pair = partner_potentials(W, kinetic);
  if (seed_potential) require_same_grid(*seed_potential, u, "darboux_family");
  auto V_plus = seed_potential ? *seed_potential : pair.V_plus.map([energy](double, double v) { return v + energy; });
  auto shift = combine(u, I, [lambda](double ui, double Ii) { return ui * ui / (lambda + Ii); });
  auto V_hat = V_plus - (2.0 * k) * differentiate(shift, 1);
  const double g = std::sqrt(lambda * (lambda + total));
  auto u_hat = combine(u, I, [lambda, g](double ui, double Ii) { return g * ui / (lambda + Ii); });
  return {lambda, energy, kinetic, g, u, std::move(I), W, W + shift, std::move(V_plus), std::move(V_hat),
          std::move(u_hat)};
}

/// One-parameter isospectral family from a normalized node-free seed.
inline IsospectralFamily isospectral_shift(const SampledFunction& u, double lambda, double energy = 0.0,
                                           Kinetic kinetic = Kinetic::half) {
  const double n2 = norm_squared(u);
  if (std::abs(n2 - 1.0) > 1e-6)
    throw invalid_input("isospectral_shift: seed must be normalized (norm² = " + std::to_string(n2) + ")");
  if (lambda >= -1.0 && lambda <= 0.0) throw invalid_input("isospectral_shift: lambda must lie outside [-1, 0]");
  return darboux_family(u, lambda, energy, kinetic);
}

struct FamilySpectrumReport {
  std::vector<double> deformed;   // levels of V_hat
  std::vector<double> reference;  // levels of the reference potential
  std::vector<double> gaps;       // |deformed − reference|
  double max_gap = 0.0;
  bool complete = true;
};

/// Compares the lowest `count` levels of V̂ against a reference (by
/// default the family's own V_plus).
inline FamilySpectrumReport family_spectrum_check(const IsospectralFamily& family, std::size_t count,
                                                  const SampledFunction* reference = nullptr) {
  const SampledFunction& ref = reference ? *reference : family.V_plus;
  auto a = numerov_eigensolve(family.V_hat, count, family.kinetic);
  auto b = numerov_eigensolve(ref, count, family.kinetic);
  FamilySpectrumReport rep;
  rep.deformed = a.energies();
  rep.reference = b.energies();
  rep.complete = a.complete && b.complete && a.size() == b.size();
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    rep.gaps.push_back(std::abs(rep.deformed[i] - rep.reference[i]));
    rep.max_gap = std::max(rep.max_gap, rep.gaps.back());
  }
  return rep;
}

}  // namespace susyqm::susy1d
