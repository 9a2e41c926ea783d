#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "susyqm/qes.hpp"

using namespace susyqm;
using namespace susyqm::qes;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Frozen values from an independent fine-grid shooting run.
const std::vector<double> even_2_0 = {2.6301150, 19.1209212, 43.2489638};
const std::vector<double> odd_3_0 = {12.81517, 40.45677, 75.72464, 117.00342};
const std::vector<double> even_2_4 = {-3.74456265, 1.0, 7.74456265};
const std::vector<double> odd_2_5 = {-7.11693, 1.08119, 9.53574};

void check_energies(const QESSolution& s, const std::vector<double>& ref, double tol) {
  REQUIRE(s.energies.size() == ref.size());
  for (std::size_t i = 0; i < ref.size(); ++i) CHECK_THAT(s.energies[i], WithinAbs(ref[i], tol));
}

}  // namespace

TEST_CASE("QESProblem validation", "[qes]") {
  CHECK_THROWS_AS(QESProblem(Parity::even, 1, -1.0), invalid_input);
  CHECK_THROWS_AS(QESProblem(Parity::even, 1, -2.0), invalid_input);
  CHECK_THROWS_AS(QESProblem(Parity::odd, -1, 0.0), invalid_input);
  CHECK_THROWS_AS(parse_parity("both"), invalid_input);
  QESProblem p;
  p.k = -1.5;
  CHECK_THROWS_AS(qes_solve(p), invalid_input);
}

TEST_CASE("qes_solve N=0", "[qes]") {
  auto s = qes_solve({Parity::even, 0, 0.0});
  CHECK(s.V0 == 2.0);
  CHECK_THAT(s.energies[0], WithinAbs(1.0, 1e-14));
  CHECK(s.roots[0].empty());
  CHECK(bethe_root_residual(s, 0) == 0.0);
  auto expect = normalized(SampledFunction::sample(s.potential.grid(), [](double x) { return std::exp(-std::cosh(x) * std::cosh(x)); }));
  CHECK(sup_distance(s.psi[0], expect) < 1e-12);
  for (double k : {0.5, 3.0, -0.5, -0.9}) {
    auto sk = qes_solve({Parity::even, 0, k});
    CHECK_THAT(sk.energies[0], WithinRel(1.0 / (1.0 + k), 1e-13));
  }
}

TEST_CASE("qes_solve tabulated cases", "[qes]") {
  auto a = qes_solve({Parity::even, 2, 0.0});
  CHECK(a.V0 == 50.0);
  check_energies(a, even_2_0, 1e-6);

  auto b = qes_solve({Parity::odd, 3, 0.0});
  CHECK(b.V0 == 128.0);
  check_energies(b, odd_3_0, 1e-5);

  auto c = qes_solve({Parity::even, 2, 4.0});
  check_energies(c, even_2_4, 1e-7);
  CHECK_THAT(c.energies[1], WithinAbs(1.0, 1e-12));

  auto d = qes_solve({Parity::odd, 2, 5.0});
  check_energies(d, odd_2_5, 1e-4);
  CHECK(d.slots == std::vector<int>{1, 3, 5});
}

TEST_CASE("qes eigenpairs satisfy the Schrodinger equation and sit in the grid spectrum", "[qes][property]") {
  for (auto p : {QESProblem(Parity::even, 2, 0.0), QESProblem(Parity::odd, 3, 0.0), QESProblem(Parity::even, 2, 4.0),
                 QESProblem(Parity::odd, 2, 5.0), QESProblem(Parity::even, 1, 1.0), QESProblem(Parity::odd, 0, 0.0)}) {
    INFO(to_string(p.parity) << " N=" << p.N << " k=" << p.k);
    auto s = qes_solve(p);
    for (std::size_t i = 0; i < s.energies.size(); ++i) {
      CHECK(schrodinger_residual(s.potential, s.psi[i], s.energies[i]) < 1e-5);
      CHECK_THAT(norm_squared(s.psi[i]), WithinAbs(1.0, 1e-10));
      CHECK(sign_changes(s.psi[i]) == s.slots[i]);
      CHECK(std::abs(s.psi[i][0]) < 1e-6 * s.psi[i].max_abs());
    }
    auto oracle = oracle_slot_energies(s);
    for (std::size_t i = 0; i < oracle.size(); ++i) CHECK_THAT(oracle[i], WithinAbs(s.energies[i], 1e-3));
  }
}

TEST_CASE("sum rules and root systems", "[qes][property]") {
  for (auto p : {QESProblem(Parity::even, 2, 0.0), QESProblem(Parity::even, 3, 1.5), QESProblem(Parity::odd, 3, 0.0),
                 QESProblem(Parity::odd, 2, 5.0), QESProblem(Parity::even, 4, 0.3)}) {
    INFO(to_string(p.parity) << " N=" << p.N << " k=" << p.k);
    auto s = qes_solve(p);
    for (std::size_t i = 0; i < s.energies.size(); ++i) {
      CHECK(s.sum_rule_residuals[i] < 1e-8);
      CHECK(bethe_root_residual(s, i) < 1e-6);
      CHECK(s.roots[i].size() == static_cast<std::size_t>(p.N));
    }
  }
}

TEST_CASE("bethe_root_residual sensitivity and errors", "[qes]") {
  auto s = qes_solve({Parity::even, 2, 0.0});
  auto r = s.roots[0];
  r[0] += 0.01;
  CHECK(bethe_root_residual(s.problem, r) > 1e-2);
  auto twin = s.roots[0];
  twin[1] = twin[0];
  CHECK_THROWS_AS(bethe_root_residual(s.problem, twin), invalid_input);
  CHECK_THROWS_AS(bethe_root_residual(s, 3), invalid_input);
}

TEST_CASE("closed_form_N1", "[qes]") {
  auto [m0, p0] = closed_form_N1(0.0);
  CHECK_THAT(m0, WithinAbs(8.0 - std::sqrt(37.0), 1e-14));
  CHECK_THAT(p0, WithinAbs(8.0 + std::sqrt(37.0), 1e-13));
  CHECK_THAT(closed_form_N1(1.5).first, WithinAbs(0.0, 1e-12));
  for (double k : {0.0, 1.0, 4.0}) {
    auto s = qes_solve({Parity::even, 1, k});
    auto [lo, hi] = closed_form_N1(k);
    CHECK_THAT(s.energies[0], WithinAbs(lo, 1e-10));
    CHECK_THAT(s.energies[1], WithinAbs(hi, 1e-10));
  }
  CHECK_THROWS_AS(closed_form_N1(-1.0), invalid_input);
}

TEST_CASE("closed_form_N1 matches qes_solve at random k", "[qes][property]") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> pick(-0.9, 10.0);
  for (int t = 0; t < 10; ++t) {
    const double k = pick(rng);
    INFO("k = " << k);
    auto s = qes_solve({Parity::even, 1, k});
    auto [lo, hi] = closed_form_N1(k);
    CHECK_THAT(s.energies[0], WithinAbs(lo, 1e-10));
    CHECK_THAT(s.energies[1], WithinAbs(hi, 1e-10));
  }
}

TEST_CASE("Razavy recursion", "[qes]") {
  // n=0: linear polynomial, root b_0.
  for (int sigma : {-1, 1}) {
    RazavyRecursion r(2.5, 0, sigma, 0);
    auto e = razavy_recursion_eigen(r);
    REQUIRE(e.size() == 1);
    CHECK_THAT(e[0], WithinAbs(1.0 * (2.0 * (0 - sigma) + 3.0) + 2.5 * 2.5, 1e-12));
  }
  // n=1, zeta=1, (1,0): P_2 = (E-2)(E-14) + 16.
  auto e = razavy_recursion_eigen(RazavyRecursion(1.0, 1, 1, 0));
  REQUIRE(e.size() == 2);
  CHECK_THAT(e[0], WithinAbs(8.0 - std::sqrt(20.0), 1e-12));
  CHECK_THAT(e[1], WithinAbs(8.0 + std::sqrt(20.0), 1e-12));
  auto P = RazavyRecursion(1.0, 1, 1, 0).polynomials(e[0]);
  CHECK(P.size() == 2);

  CHECK_THROWS_AS(RazavyRecursion(1.0, 1, 1, 1), invalid_input);
  CHECK_THROWS_AS(RazavyRecursion(1.0, 1, 0, 0), invalid_input);
  CHECK_THROWS_AS(RazavyRecursion(1.0, -1, 1, 0), invalid_input);
}

TEST_CASE("Razavy and QES agree on the same potential", "[qes][property]") {
  for (auto p : {QESProblem(Parity::even, 2, 0.0), QESProblem(Parity::even, 1, 0.0), QESProblem(Parity::odd, 3, 0.0),
                 QESProblem(Parity::even, 2, 4.0), QESProblem(Parity::odd, 2, 5.0), QESProblem(Parity::even, 3, -0.4)}) {
    INFO(to_string(p.parity) << " N=" << p.N << " k=" << p.k);
    auto s = qes_solve(p);
    auto map = razavy_from_qes(p);
    CHECK_THAT(2.0 * map.recursion.zeta * map.recursion.zeta, WithinRel(s.V0, 1e-14));
    auto ER = razavy_recursion_eigen(map.recursion);
    REQUIRE(ER.size() == s.energies.size());
    for (std::size_t i = 0; i < ER.size(); ++i) CHECK_THAT(ER[i] / 2.0 - map.offset, WithinAbs(s.energies[i], 1e-6));
  }
}

TEST_CASE("finkel_eigenfunction", "[qes]") {
  Grid1D g(-3.0, 3.0, 3001);
  for (auto [sigma, eta] : {std::pair{1, 0}, std::pair{0, -1}, std::pair{0, 1}, std::pair{-1, 0}}) {
    RazavyRecursion r(3.0, 1, sigma, eta);
    INFO("sigma=" << sigma << " eta=" << eta);
    auto V = razavy_potential(g, r.zeta, r.M());
    for (double ER : razavy_recursion_eigen(r)) {
      auto psi = finkel_eigenfunction(r, ER, g);
      CHECK(schrodinger_residual(V, psi, ER / 2.0) < 1e-4);
      CHECK_THAT(norm_squared(psi), WithinAbs(1.0, 1e-6));
      const std::size_t mid = g.nearest(0.0);
      const double at0 = psi[mid];
      // Odd exactly when the sinh exponent (1 - sigma - eta)/2 is non-zero.
      if (1 - sigma - eta == 0) {
        CHECK(std::abs(at0) > 1e-3);
        CHECK(std::abs(psi[mid + 100] - psi[mid - 100]) < 1e-12);
      } else {
        CHECK(std::abs(at0) < 1e-12);
        CHECK(std::abs(psi[mid + 100] + psi[mid - 100]) < 1e-12);
      }
    }
  }
}

TEST_CASE("finkel eigenfunction matches the QES eigenfunction", "[qes]") {
  QESProblem p(Parity::even, 2, 0.0);
  auto s = qes_solve(p);
  auto map = razavy_from_qes(p);
  auto ER = razavy_recursion_eigen(map.recursion);
  for (std::size_t i = 0; i < ER.size(); ++i) {
    auto psi = finkel_eigenfunction(map.recursion, ER[i], s.potential.grid());
    CHECK(sup_distance(psi, s.psi[i]) < 1e-6);
  }
}

TEST_CASE("unclassified_groundstate", "[qes]") {
  CHECK(unclassified_groundstate(1.0).E == 0.0);
  auto u = unclassified_groundstate(2.0);
  CHECK(u.E == 1.5);
  CHECK(schrodinger_residual(u.V, u.psi, u.E) < 1e-6);
  auto spec = numerov_eigensolve(u.V, 1);
  CHECK_THAT(spec[0].energy, WithinAbs(1.5, 1e-4));
  CHECK_THROWS_AS(unclassified_groundstate(0.0), invalid_input);
  for (double a : {0.5, 3.0, 7.0}) {
    auto w = unclassified_groundstate(a);
    INFO("alpha = " << a);
    CHECK(schrodinger_residual(w.V, w.psi, w.E) < 1e-6);
    CHECK_THAT(numerov_eigensolve(w.V, 1)[0].energy, WithinAbs(w.E, 1e-4));
  }
}

TEST_CASE("divergence_profile", "[qes]") {
  auto rows = divergence_profile(Parity::even, 0, {0.0, -0.5, -0.9, -0.99});
  REQUIRE(rows.size() == 4);
  for (const auto& r : rows) {
    CHECK_THAT(r.E0_scaled, WithinAbs(1.0, 1e-12));
    CHECK_THAT(r.V0_scaled, WithinAbs(2.0, 1e-12));
  }
  // N=1: E_-·(1+k) → 9 − 6 at k → −1.
  auto n1 = divergence_profile(Parity::even, 1, {-0.9, -0.99, -0.999, -0.9999});
  double prev = INFINITY;
  for (const auto& r : n1) {
    const double d = std::abs(r.E0_scaled - 3.0);
    CHECK(d < prev);
    prev = d;
    CHECK_THAT(r.V0_scaled, WithinAbs(18.0, 1e-9));
  }
  CHECK(prev < 1e-3);
  CHECK_THROWS_AS(divergence_profile(Parity::even, 0, {0.0, -1.0}), invalid_input);
}

TEST_CASE("doublet_gap", "[qes]") {
  auto s = qes_solve({Parity::odd, 2, 5.0});
  auto d = doublet_gap(s.V0, 5.0);
  CHECK(d.gap > 1e-3);
  CHECK(d.gap < 1e-2);
  CHECK_THAT(d.E1, WithinAbs(s.energies[0], 1e-3));
  CHECK(doublet_gap(2.0, 0.0).gap > 0.5);
  CHECK_THROWS_AS(doublet_gap(-1.0, 1.0), invalid_input);
}

TEST_CASE("doublet gap shrinks as the barrier grows", "[qes][property]") {
  double prev = INFINITY;
  for (double k : {3.0, 4.0, 5.0}) {
    auto s = qes_solve({Parity::odd, 2, k});
    auto d = doublet_gap(s.V0, k);
    INFO("k = " << k << " V0 = " << s.V0 << " gap = " << d.gap);
    CHECK(d.gap < prev);
    prev = d.gap;
  }
}
