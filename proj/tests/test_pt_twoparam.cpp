#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "susyqm/pt_twoparam.hpp"

using namespace susyqm;
using namespace susyqm::pt;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

double parity_defect(const SampledFunction& f, int sign) {
  double m = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) m = std::max(m, std::abs(f[i] - sign * f[f.size() - 1 - i]));
  return m / f.max_abs();
}

std::vector<SampledFunction> smooth_tests(const Grid1D& g, std::mt19937& rng, int count) {
  std::uniform_real_distribution<double> centre(-2.0, 2.0), width(0.6, 2.0), freq(0.0, 2.0);
  std::vector<SampledFunction> out;
  for (int i = 0; i < count; ++i) {
    double c = centre(rng), w = width(rng), k = freq(rng);
    out.push_back(SampledFunction::sample(g, [=](double x) {
      double z = (x - c) / w;
      return std::exp(-z * z) * (1.0 + 0.5 * std::cos(k * x));
    }));
  }
  return out;
}

}  // namespace

TEST_CASE("PTParams validation", "[pt]") {
  CHECK_THROWS_AS(PTParams(0.0, 2), invalid_input);
  CHECK_THROWS_AS(PTParams(1.0, 0), invalid_input);
  CHECK(PTParams(2.0, 3).epsilon() == 36.0);
}

TEST_CASE("ih_ground normalization", "[pt]") {
  auto psi = ih_ground(1, 1.0);
  CHECK_THAT(norm_squared(psi), WithinAbs(1.0, 1e-8));
  CHECK_THAT(psi[psi.grid().nearest(0.0)], WithinRel(std::sqrt(0.5), 1e-12));
  auto psi3 = ih_ground(3, 2.0);
  CHECK_THAT(norm_squared(psi3), WithinAbs(1.0, 1e-8));
  double c = std::sqrt(2.0 * std::tgamma(3.5) / (std::sqrt(std::numbers::pi) * std::tgamma(3.0)));
  CHECK_THAT(psi3[psi3.grid().nearest(0.0)], WithinRel(c, 1e-10));
  CHECK_THROWS_AS(ih_ground(0, 1.0), invalid_input);
}

TEST_CASE("ih_raise climbs the ladder", "[pt]") {
  const double a = 1.0;
  const int l = 1;
  auto g = Grid1D::standard();
  auto psi = ih_ground(l, a, g);
  auto up1 = ih_raise(psi, l, a);
  auto up2 = ih_raise(up1, l + 1, a);
  CHECK_THAT(norm_squared(up1), WithinAbs(1.0, 1e-8));
  CHECK_THAT(norm_squared(up2), WithinAbs(1.0, 1e-8));
  // ψ_ℓ^{ℓ+2} lives in the well (ℓ+2)(ℓ+3) at E = −α²ℓ².
  auto V = pt_potential(g, a, (l + 2) * (l + 3));
  CHECK(schrodinger_residual(V, up2, -a * a * l * l, Kinetic::unit) < 1e-4);
  CHECK(parity_defect(psi, +1) < 1e-12);
  CHECK(parity_defect(up1, -1) < 1e-9);
  CHECK(parity_defect(up2, +1) < 1e-9);
  CHECK_THROWS_AS(ih_raise(psi, 0, a), invalid_input);
}

TEST_CASE("gamma1_bound", "[pt]") {
  CHECK_THAT(gamma1_bound(PTParams(1.0, 1)), WithinAbs(1.5, 1e-12));
  PTParams formal;
  formal.m = 0;
  CHECK_THAT(gamma1_bound(formal), WithinAbs(1.0, 1e-12));
  for (int m = 1; m <= 5; ++m)
    CHECK_THAT(gamma1_bound(PTParams(2.0, m)), WithinRel(2.0 * gamma1_bound(PTParams(1.0, m)), 1e-12));
  // Bound is the reciprocal of ∫₀^∞ sech^{2(m+1)}.
  CHECK_THAT(gamma1_bound(PTParams(1.0, 3)) * sech_power_integral(40.0, 1.0, 4), WithinAbs(1.0, 1e-12));
}

TEST_CASE("sech_power_integral matches quadrature", "[pt]") {
  for (int j : {1, 2, 4}) {
    double q = special::integrate_adaptive([=](double y) { return std::pow(1.0 / std::cosh(1.3 * y), 2 * j); }, 0.0,
                                           0.9, 1e-14);
    CHECK_THAT(sech_power_integral(0.9, 1.3, j), WithinAbs(q, 1e-13));
  }
}

TEST_CASE("build_factorization at the origin recovers the IH operators", "[pt]") {
  PTParams p(1.0, 3);
  auto f = build_factorization(p, 0.0, 0.0);
  REQUIRE(f.valid);
  double eta_err = 0.0, beta_err = 0.0;
  for (std::size_t i = 0; i < f.eta.size(); ++i) {
    eta_err = std::max(eta_err, std::abs(f.eta[i] - 1.0));
    beta_err = std::max(beta_err, std::abs(f.beta[i] - 4.0 * std::tanh(f.eta.x(i))));
  }
  CHECK(eta_err < 1e-12);
  CHECK(beta_err < 1e-10);
  auto sech2 = SampledFunction::sample(f.eta.grid(), [](double x) { return std::pow(1.0 / std::cosh(x), 2); });
  CHECK(factorization_residual(f, {sech2}) < 1e-5);
}

TEST_CASE("build_factorization values at x = 0", "[pt]") {
  PTParams p(1.0, 3);
  for (auto [g1, g2] : {std::pair{0.1, 0.5}, {-0.7, 0.2}, {1.2, 2.0}}) {
    auto f = build_factorization(p, g1, g2);
    REQUIRE(f.valid);
    auto i0 = f.eta.grid().nearest(0.0);
    CHECK_THAT(f.eta[i0], WithinAbs(1.0 / std::sqrt(1.0 + g2), 1e-14));
    CHECK_THAT(f.beta[i0], WithinAbs(g1 / std::sqrt(1.0 + g2), 1e-14));
  }
}

TEST_CASE("two-parameter factorization identities", "[pt]") {
  PTParams p(1.0, 3);
  auto f = build_factorization(p, 0.1, 0.5);
  REQUIRE(f.valid);
  CHECK(riccati_residual(f) < 1e-6);
  auto [c1, c2] = coupled_residuals(f);
  CHECK(c1 < 1e-6);
  CHECK(c2 < 1e-6);
  std::mt19937 rng(42);
  auto tests = smooth_tests(f.eta.grid(), rng, 5);
  CHECK(factorization_residual(f, tests) < 1e-4);

  auto bent = f;
  bent.eta = 1.01 * f.eta;
  CHECK(factorization_residual(bent, tests) > 1e-2);
}

TEST_CASE("beta/eta ratio", "[pt]") {
  PTParams p(1.0, 2);
  auto pure = build_factorization(p, 0.0, 0.9);
  REQUIRE(pure.valid);
  double err = 0.0;
  for (std::size_t i = 0; i < pure.eta.size(); ++i)
    err = std::max(err, std::abs(pure.beta[i] / pure.eta[i] - 3.0 * std::tanh(pure.eta.x(i))));
  CHECK(err < 1e-8);

  auto f = build_factorization(p, 0.6, 0.4);
  REQUIRE(f.valid);
  err = 0.0;
  for (std::size_t i = 0; i < f.eta.size(); ++i)
    err = std::max(err, std::abs(f.beta[i] / f.eta[i] - (3.0 * std::tanh(f.eta.x(i)) + f.S[i])));
  CHECK(err < 1e-8);
}

TEST_CASE("inadmissible parameters are flagged with a location", "[pt]") {
  PTParams p(1.0, 3);
  auto big = build_factorization(p, 99.0, 0.0);
  CHECK_FALSE(big.valid);
  CHECK_FALSE(big.failure.empty());
  auto neg = build_factorization(p, 0.0, -1.5);
  CHECK_FALSE(neg.valid);
  REQUIRE(neg.failure_x.has_value());
  CHECK(std::abs(*neg.failure_x) < 1.0);
  CHECK_THROWS_AS(build_sl_problem(neg), invalid_input);
  CHECK_THROWS_AS(factorization_residual(neg, {}), invalid_input);
  CHECK(neg.gamma2_condition_raw == false);
}

TEST_CASE("SL problem spectrum", "[pt]") {
  PTParams p(1.0, 3);
  for (auto [g1, g2] : {std::pair{0.0, 0.0}, {0.1, 0.3}, {0.1, 0.5}}) {
    auto sl = build_sl_problem(build_factorization(p, g1, g2));
    for (std::size_t i = 0; i < sl.p.size(); ++i) REQUIRE(sl.p[i] == sl.w[i]);
    auto spec = solve_sl(sl, 3);
    REQUIRE(spec.size() == 3);
    for (std::size_t n = 0; n < 3; ++n) {
      INFO("gamma = (" << g1 << ", " << g2 << ") level " << n);
      CHECK_THAT(spec[n].energy, WithinAbs(sl.expected[n], 1e-3));
    }
    auto phi0 = sl_ground(sl);
    CHECK(sl_residual(sl.p, sl.q, sl.w, phi0, -9.0) < 1e-4);
    CHECK_THAT(integrate(sl.w * phi0 * phi0), WithinAbs(1.0, 1e-10));
  }
}

TEST_CASE("sl_ground shape and parity", "[pt]") {
  PTParams p(1.0, 3);
  auto g0 = sl_ground(build_factorization(p, 0.0, 0.0));
  auto ref = normalized(SampledFunction::sample(g0.grid(), [](double x) { return std::pow(1.0 / std::cosh(x), 3); }));
  CHECK(sup_distance(g0, ref) < 1e-10);
  CHECK(parity_defect(g0, +1) < 1e-12);

  // γ₁ at 90% of the index-m bound.
  const double g1 = 0.9 * sech_bound(1.0, 3);
  auto g = sl_ground(build_factorization(p, g1, 0.0));
  CHECK(sign_changes(g, 0.0) == 0);
  for (std::size_t i = 1; i + 1 < g.size(); ++i) REQUIRE(g[i] > 0.0);
  CHECK(parity_defect(g, +1) > 1e-3);
}

TEST_CASE("susy_partner", "[pt]") {
  PTParams p(1.0, 2);
  auto flat = susy_partner(0.0, p);
  CHECK(sup_distance(flat.V_tilde, pt_potential(flat.V_tilde.grid(), 1.0, 12.0)) < 1e-12);

  auto sp = susy_partner(0.5, p);
  auto spec = numerov_eigensolve(sp.V_tilde, 3, Kinetic::unit);
  REQUIRE(spec.size() == 3);
  const double expect[] = {-9.0, -4.0, -1.0};
  for (int n = 0; n < 3; ++n) CHECK_THAT(spec[n].energy, WithinAbs(expect[n], 1e-3));
  CHECK(schrodinger_residual(sp.V_tilde, sp.phi0, sp.energy, Kinetic::unit) < 1e-5);
  CHECK_THROWS_AS(susy_partner(gamma1_bound(p) * 1.01, p), invalid_input);
}

TEST_CASE("isospectral deformation over a 5x5 parameter sample", "[pt][property]") {
  PTParams p(1.0, 3);
  const double b = sech_bound(1.0, 3);
  int accepted = 0;
  for (double s1 : {-0.8, -0.4, 0.0, 0.4, 0.8})
    for (double g2 : {-0.4, 0.0, 0.3, 0.8, 1.5}) {
      auto f = build_factorization(p, s1 * b, g2);
      if (!f.valid) continue;
      std::optional<SLProblem> sl;
      try {
        sl.emplace(build_sl_problem(f));
      } catch (const invalid_input&) {
        continue;
      }
      ++accepted;
      auto spec = solve_sl(*sl, 3);
      REQUIRE(spec.size() == 3);
      for (std::size_t n = 0; n < 3; ++n) {
        INFO("gamma1 = " << s1 * b << ", gamma2 = " << g2 << ", level " << n);
        CHECK_THAT(spec[n].energy, WithinAbs(sl->expected[n], 1e-3));
      }
    }
  CHECK(accepted >= 20);
}

TEST_CASE("deformation is continuous at the origin", "[pt][property]") {
  PTParams p(1.0, 2);
  auto base = build_factorization(p, 0.0, 0.0);
  double prev = INFINITY;
  for (double t : {0.4, 0.2, 0.1, 0.05, 0.025}) {
    auto f = build_factorization(p, t, t);
    double d = std::max(sup_distance(f.eta, base.eta), sup_distance(f.beta, base.beta));
    CHECK(d < prev);
    prev = d;
  }
  CHECK(prev < 0.05);
}

TEST_CASE("coupled equations hold across the sample", "[pt][property]") {
  PTParams p(1.0, 3);
  const double b = gamma1_bound(p);
  for (double s1 : {-0.8, -0.4, 0.0, 0.4, 0.8})
    for (double g2 : {-0.4, 0.0, 0.3, 0.8, 1.5}) {
      auto f = build_factorization(p, s1 * b, g2);
      if (!f.valid) continue;
      auto [c1, c2] = coupled_residuals(f);
      INFO("gamma = (" << f.gamma1 << ", " << f.gamma2 << ")");
      CHECK(c1 < 1e-6);
      CHECK(c2 < 1e-6);
    }
}

TEST_CASE("coupled residuals shrink under refinement near the bound", "[pt][property]") {
  PTParams p(1.0, 3);
  const double g1 = -0.9 * gamma1_bound(p);
  auto coarse = coupled_residuals(build_factorization(p, g1, 1.8, Grid1D(-12, 12, 3001))).second;
  auto fine = coupled_residuals(build_factorization(p, g1, 1.8, Grid1D(-12, 12, 6001))).second;
  CHECK(fine < coarse / 8.0);
  CHECK(fine < 1e-6);
}
