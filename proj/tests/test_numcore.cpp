#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "susyqm/calculus.hpp"
#include "susyqm/eigensolve.hpp"
#include "susyqm/grid.hpp"
#include "susyqm/special.hpp"

using namespace susyqm;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

double sup_error(const SampledFunction& f, auto exact, std::size_t skip = 0) {
  double m = 0.0;
  for (std::size_t i = skip; i + skip < f.size(); ++i) m = std::max(m, std::abs(f[i] - exact(f.x(i))));
  return m;
}

SampledFunction pt_well(const Grid1D& g, double alpha, int m) {
  return SampledFunction::sample(g, [=](double x) {
    double s = 1.0 / std::cosh(alpha * x);
    return -alpha * alpha * m * (m + 1) * s * s;
  });
}

}  // namespace

TEST_CASE("Grid1D rejects degenerate layouts", "[grid]") {
  CHECK_THROWS_AS(Grid1D(0.0, 1.0, 15), invalid_input);
  CHECK_THROWS_AS(Grid1D(1.0, 1.0, 100), invalid_input);
  CHECK_THROWS_AS(Grid1D(2.0, 1.0, 100), invalid_input);
  CHECK_THROWS_AS(Grid1D(0.0, INFINITY, 100), invalid_input);
  Grid1D g(-1.0, 1.0, 21);
  CHECK(g.h() == Catch::Approx(0.1));
  CHECK(g.x(20) == 1.0);
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(g.x(i) > g.x(i - 1));
}

TEST_CASE("SampledFunction rejects non-finite values", "[grid]") {
  Grid1D g(0.0, 1.0, 16);
  std::vector<double> v(16, 1.0);
  v[7] = NAN;
  CHECK_THROWS_AS(SampledFunction(g, v), invalid_input);
  CHECK_THROWS_AS(SampledFunction(g, std::vector<double>(15, 0.0)), invalid_input);
  Grid1D other(0.0, 2.0, 16);
  CHECK_THROWS_AS(SampledFunction(g) + SampledFunction(other), invalid_input);
}

TEST_CASE("differentiate: polynomial, trigonometric and constant inputs", "[calculus]") {
  Grid1D g(-1.0, 1.0, 101);
  auto f = SampledFunction::sample(g, [](double x) { return x * x; });
  CHECK(sup_error(differentiate(f, 1), [](double x) { return 2.0 * x; }) < 1e-10);

  Grid1D gp(-std::numbers::pi, std::numbers::pi, 401);
  auto s = SampledFunction::sample(gp, [](double x) { return std::sin(x); });
  CHECK(sup_error(differentiate(s, 2), [](double x) { return -std::sin(x); }) < 1e-6);

  auto c = SampledFunction::sample(g, [](double) { return 3.25; });
  CHECK(differentiate(c, 1).max_abs() < 1e-12);

  CHECK_THROWS_AS(differentiate(c, 3), invalid_input);
  CHECK_THROWS_AS(differentiate(c, 0), invalid_input);
}

TEST_CASE("differentiate converges at fourth order", "[calculus]") {
  auto err = [](std::size_t n) {
    Grid1D g(0.0, 2.0, n);
    auto f = SampledFunction::sample(g, [](double x) { return std::exp(std::sin(x)); });
    return sup_error(differentiate(f, 1), [](double x) { return std::cos(x) * std::exp(std::sin(x)); });
  };
  double ratio = err(101) / err(201);
  CHECK(ratio > 12.0);
}

TEST_CASE("integrate_cumulative", "[calculus]") {
  Grid1D g(0.0, 1.0, 64);
  auto one = SampledFunction::sample(g, [](double) { return 1.0; });
  CHECK(sup_error(integrate_cumulative(one), [](double x) { return x; }) < 1e-12);

  Grid1D gc(0.0, std::numbers::pi / 2, 201);
  auto c = SampledFunction::sample(gc, [](double x) { return std::cos(x); });
  auto F = integrate_cumulative(c);
  CHECK(F[0] == 0.0);
  CHECK(sup_error(F, [](double x) { return std::sin(x); }) < 1e-8);

  Grid1D gw(-12.0, 12.0, 3001);
  auto gauss = SampledFunction::sample(gw, [](double x) { return std::exp(-x * x / 2) / std::sqrt(2 * std::numbers::pi); });
  CHECK_THAT(integrate(gauss), WithinAbs(1.0, 1e-6));
}

TEST_CASE("numerov_eigensolve: harmonic oscillator", "[eigensolve]") {
  Grid1D g(-10.0, 10.0, 2001);
  auto V = SampledFunction::sample(g, [](double q) { return 0.5 * q * q; });
  auto spec = numerov_eigensolve(V, 6);
  REQUIRE(spec.size() == 6);
  CHECK(spec.complete);
  for (std::size_t n = 0; n < 6; ++n) {
    CHECK_THAT(spec[n].energy, WithinAbs(n + 0.5, 1e-6));
    CHECK_THAT(norm_squared(spec[n].psi), WithinAbs(1.0, 1e-8));
    CHECK(sign_changes(spec[n].psi) == static_cast<int>(n));
  }
}

TEST_CASE("numerov_eigensolve: Pöschl-Teller well with unit kinetic term", "[eigensolve]") {
  auto V = pt_well(Grid1D::standard(), 1.0, 4);
  auto spec = numerov_eigensolve(V, 4, Kinetic::unit);
  REQUIRE(spec.size() == 4);
  for (int n = 0; n < 4; ++n) CHECK_THAT(spec[n].energy, WithinAbs(-(4.0 - n) * (4.0 - n), 1e-4));
}

TEST_CASE("numerov_eigensolve: quartic sinh well ground state", "[eigensolve]") {
  Grid1D g(-3.0, 3.0, 3001);
  auto V = SampledFunction::sample(g, [](double x) { return 2.0 * std::pow(std::sinh(x), 4); });
  auto spec = numerov_eigensolve(V, 1);
  CHECK_THAT(spec[0].energy, WithinAbs(1.0, 1e-4));
}

TEST_CASE("numerov_eigensolve flags partial spectra", "[eigensolve]") {
  auto V = pt_well(Grid1D::standard(), 1.0, 2);
  auto spec = numerov_eigensolve(V, 5, Kinetic::unit);
  CHECK_FALSE(spec.complete);
  CHECK(spec.size() == 2);
  CHECK(spec.requested == 5);
  CHECK_THROWS_AS(numerov_eigensolve(V, 0), invalid_input);
}

TEST_CASE("sl_eigensolve reduces to the Schrödinger solver", "[eigensolve]") {
  Grid1D g(-10.0, 10.0, 2001);
  auto V = SampledFunction::sample(g, [](double q) { return 0.5 * q * q; });
  auto one = SampledFunction::sample(g, [](double) { return 1.0; });
  // d/dx[Φ'] - 2VΦ + 2EΦ = 0 is -½Φ'' + VΦ = EΦ.
  auto sl = sl_eigensolve(0.5 * one, -1.0 * V, one, 4);
  auto nm = numerov_eigensolve(V, 4);
  for (std::size_t n = 0; n < 4; ++n) CHECK_THAT(sl[n].energy, WithinAbs(nm[n].energy, 1e-6));
}

TEST_CASE("sl_eigensolve: weighted problem keeps w-normalization", "[eigensolve]") {
  auto g = Grid1D::standard();
  auto w = SampledFunction::sample(g, [](double x) { return 1.0 + 0.5 / std::cosh(x); });
  auto V = pt_well(g, 1.0, 3);
  auto spec = sl_eigensolve(w, -1.0 * V, w, 2);
  REQUIRE(spec.size() == 2);
  for (std::size_t n = 0; n < 2; ++n) {
    CHECK_THAT(integrate(w * spec[n].psi * spec[n].psi), WithinAbs(1.0, 1e-8));
    CHECK(sl_residual(w, -1.0 * V, w, spec[n].psi, spec[n].energy) < 1e-3);
  }
}

TEST_CASE("sl_eigensolve rejects non-positive coefficients", "[eigensolve]") {
  auto g = Grid1D::standard();
  auto one = SampledFunction::sample(g, [](double) { return 1.0; });
  auto bad = SampledFunction::sample(g, [](double x) { return x; });
  CHECK_THROWS_AS(sl_eigensolve(bad, one, one, 1), invalid_input);
  CHECK_THROWS_AS(sl_eigensolve(one, one, bad, 1), invalid_input);
}

TEST_CASE("schrodinger_residual separates exact and wrong pairs", "[eigensolve]") {
  Grid1D g(-10.0, 10.0, 2001);
  auto V = SampledFunction::sample(g, [](double q) { return 0.5 * q * q; });
  auto psi = SampledFunction::sample(g, [](double q) { return std::exp(-q * q / 2); });
  CHECK(schrodinger_residual(V, psi, 0.5) < 1e-6);
  CHECK(schrodinger_residual(V, psi, 0.7) > 1e-2);

  Grid1D gs(-3.0, 3.0, 3001);
  auto Vs = SampledFunction::sample(gs, [](double x) { return 2.0 * std::pow(std::sinh(x), 4); });
  auto ps = SampledFunction::sample(gs, [](double x) { return std::exp(-std::cosh(x) * std::cosh(x)); });
  CHECK(schrodinger_residual(Vs, ps, 1.0) < 1e-6);

  CHECK_THROWS_AS(schrodinger_residual(V, SampledFunction(g), 0.5), invalid_input);
}

TEST_CASE("eigenvalues are stable under refinement and box widening", "[eigensolve][property]") {
  auto V = [](double x) { return 0.5 * x * x + 0.1 * std::pow(x, 4); };
  auto base = numerov_eigensolve(SampledFunction::sample(Grid1D(-10, 10, 2001), V), 5);
  auto fine = numerov_eigensolve(SampledFunction::sample(Grid1D(-10, 10, 4001), V), 5);
  auto wide = numerov_eigensolve(SampledFunction::sample(Grid1D(-12, 12, 2401), V), 5);
  for (std::size_t n = 0; n < 5; ++n) {
    CHECK_THAT(base[n].energy, WithinAbs(fine[n].energy, 2e-6));
    CHECK_THAT(base[n].energy, WithinAbs(wide[n].energy, 2e-6));
  }
}

TEST_CASE("random confining potentials: residuals, nodes, SL agreement", "[eigensolve][property]") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> quad(0.2, 2.0), quart(0.0, 0.3), ripple(-1.0, 1.0), phase(0.0, 6.0);
  Grid1D g(-10.0, 10.0, 2001);
  auto one = SampledFunction::sample(g, [](double) { return 1.0; });
  for (int trial = 0; trial < 5; ++trial) {
    double a = quad(rng), b = quart(rng), c = ripple(rng), d = phase(rng);
    auto V = SampledFunction::sample(g, [=](double x) { return a * x * x + b * std::pow(x, 4) + c * std::sin(x + d); });
    auto spec = numerov_eigensolve(V, 5, Kinetic::unit);
    auto sl = sl_eigensolve(one, -1.0 * V, one, 5);
    REQUIRE(spec.size() == 5);
    for (std::size_t n = 0; n < 5; ++n) {
      INFO("trial " << trial << " level " << n);
      if (n > 0) CHECK(spec[n].energy > spec[n - 1].energy);
      CHECK(schrodinger_residual(V, spec[n].psi, spec[n].energy, Kinetic::unit) < 1e-4 * (1 + std::abs(spec[n].energy)));
      CHECK(sign_changes(spec[n].psi) == static_cast<int>(n));
      CHECK_THAT(sl[n].energy, WithinAbs(spec[n].energy, 1e-5));
    }
  }
}

TEST_CASE("Lanczos gamma", "[special]") {
  CHECK_THAT(special::gamma(5.0), WithinRel(24.0, 1e-12));
  CHECK_THAT(special::gamma(2.5), WithinRel(0.75 * std::sqrt(std::numbers::pi), 1e-12));
  CHECK_THAT(special::gamma(0.5), WithinRel(std::sqrt(std::numbers::pi), 1e-12));
  CHECK_THAT(special::gamma(-0.5), WithinRel(-2.0 * std::sqrt(std::numbers::pi), 1e-11));
  for (double x : {0.3, 1.7, 4.2, 9.9}) CHECK_THAT(special::gamma(x), WithinRel(std::tgamma(x), 1e-12));
  auto z = special::gamma(std::complex<double>(3.0, 0.0));
  CHECK_THAT(z.real(), WithinRel(2.0, 1e-12));
  CHECK(std::abs(z.imag()) < 1e-12);
  // |Γ(iy)|² = π / (y sinh πy)
  auto gi = special::gamma(std::complex<double>(0.0, 1.3));
  CHECK_THAT(std::norm(gi), WithinRel(std::numbers::pi / (1.3 * std::sinh(std::numbers::pi * 1.3)), 1e-11));
}

TEST_CASE("adaptive quadrature", "[special]") {
  CHECK_THAT(special::integrate_adaptive([](double x) { return std::exp(-x * x); }, -8.0, 8.0, 1e-14),
             WithinAbs(std::sqrt(std::numbers::pi), 1e-13));
  CHECK_THAT(special::integrate_adaptive([](double x) { return std::sqrt(x); }, 0.0, 1.0, 1e-12),
             WithinAbs(2.0 / 3.0, 1e-10));
}

TEST_CASE("differentiate_fine converges at sixth order", "[calculus]") {
  auto err = [](std::size_t n) {
    Grid1D g(0.0, 2.0, n);
    auto f = SampledFunction::sample(g, [](double x) { return std::exp(std::sin(x)); });
    return sup_error(differentiate_fine(f), [](double x) { return std::cos(x) * std::exp(std::sin(x)); }, 4);
  };
  CHECK(err(101) / err(201) > 48.0);
}
