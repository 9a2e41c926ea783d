#pragma once

#include <chrono>
#include <string>
#include <vector>

#include "susyqm/pt_twoparam.hpp"
#include "susyqm/qes.hpp"
#include "susyqm/report.hpp"
#include "susyqm/susy1d.hpp"
#include "susyqm/susy2d.hpp"

namespace susyqm {

namespace acceptance_detail {

using clock = std::chrono::steady_clock;

inline double seconds_since(clock::time_point t0) {
  return std::chrono::duration<double>(clock::now() - t0).count();
}

inline std::string label(const qes::QESProblem& p) {
  return std::string(qes::to_string(p.parity)) + " N=" + std::to_string(p.N) + " k=" + io::format_g17(p.k);
}

struct TableCase {
  qes::QESProblem problem;
  double V0;
  std::vector<double> energies;
  double tolerance;
};

/// Published QES energies with the absolute tolerances they are quoted to.
inline const std::vector<TableCase>& qes_table() {
  static const std::vector<TableCase> t = {
      {{qes::Parity::even, 2, 0.0}, 50.0, {2.6301, 19.0121, 43.2490}, 5e-4},
      {{qes::Parity::odd, 3, 0.0}, 128.0, {12.8152, 40.4568, 75.7246, 117.003}, 5e-3},
      {{qes::Parity::even, 2, 4.0}, 2.0, {-3.74456, 1.00000, 7.74456}, 1e-4},
      {{qes::Parity::odd, 2, 5.0}, 2.0, {-7.11693, 1.08119, 9.53574}, 1e-4},
  };
  return t;
}

}  // namespace acceptance_detail

/// Runs every acceptance criterion. Groups are named "1" … "16" and
/// "runtime"; each check carries its tolerance and provenance.
inline VerificationReport run_acceptance() {
  namespace ad = acceptance_detail;
  using namespace provenance;
  VerificationReport r;
  const auto start = ad::clock::now();

  // 1–4: tabulated QES energies.
  std::vector<qes::QESSolution> solved;
  for (std::size_t c = 0; c < ad::qes_table().size(); ++c) {
    const auto& tc = ad::qes_table()[c];
    const std::string g = std::to_string(c + 1);
    const auto t0 = ad::clock::now();
    auto s = qes::qes_solve(tc.problem);
    const double dt = ad::seconds_since(t0);
    r.abs(g, "V0", "V0 for " + ad::label(tc.problem), tc.V0, s.V0, 1e-12 * tc.V0, closed_form);
    for (std::size_t i = 0; i < tc.energies.size(); ++i)
      r.abs(g, "E" + std::to_string(s.slots[i]), "tabulated energy, " + ad::label(tc.problem), tc.energies[i],
            s.energies[i], tc.tolerance, reference_table);
    if (c == 2) r.abs(g, "E2-exact", "middle level equals 1", 1.0, s.energies[1], 1e-5, closed_form);
    if (c < 2) r.timing(g, "runtime", "qes_solve wall clock", dt, 1.0);
    solved.push_back(std::move(s));
  }

  // 5: every QES energy sits at its slot in the grid spectrum.
  {
    const auto t0 = ad::clock::now();
    for (const auto& s : solved) {
      auto grid_levels = qes::oracle_slot_energies(s);
      for (std::size_t i = 0; i < grid_levels.size(); ++i)
        r.abs("5", ad::label(s.problem) + " n=" + std::to_string(s.slots[i]), "grid eigenvalue at the QES slot",
              s.energies[i], grid_levels[i], 1e-3, oracle);
    }
    r.timing("5", "runtime", "grid cross-check wall clock", ad::seconds_since(t0), 30.0);
  }

  // 6: closed form for N = 1.
  for (double k : {0.0, 1.0, 4.0, 9.0}) {
    auto s = qes::qes_solve({qes::Parity::even, 1, k});
    auto [lo, hi] = qes::closed_form_N1(k);
    r.abs("6", "k=" + io::format_g17(k) + " E-", "closed form vs recurrence matrix", lo, s.energies[0], 1e-10, closed_form);
    r.abs("6", "k=" + io::format_g17(k) + " E+", "closed form vs recurrence matrix", hi, s.energies[1], 1e-10, closed_form);
  }
  r.abs("6", "k=1.5 E-", "negative-energy threshold", 0.0, qes::closed_form_N1(1.5).first, 1e-10, closed_form);

  // 7: Pöschl–Teller baseline, m = 4, α = 1.
  {
    auto spec = numerov_eigensolve(pt::pt_potential(Grid1D::standard(), 1.0, 20.0), 4, Kinetic::unit);
    const auto expect = pt::pt_spectrum(1.0, 4);
    for (std::size_t n = 0; n < 4; ++n)
      r.abs("7", "n=" + std::to_string(n), "grid level of the m=4 well", expect[n],
            n < spec.size() ? spec[n].energy : NAN, 1e-4, closed_form);
  }

  // 8: two-parameter SL isospectrality, m = 3, α = 1.
  {
    const pt::PTParams p(1.0, 3);
    const double b = pt::sech_bound(1.0, 3);
    const std::vector<std::pair<double, double>> sample = {
        {0.0, 0.0}, {0.4 * b, 0.0}, {0.0, 0.8}, {-0.4 * b, 0.3}, {0.8 * b, 1.5}};
    for (auto [g1, g2] : sample) {
      auto fact = pt::build_factorization(p, g1, g2);
      const std::string tag = "(" + io::format_g17(g1) + "," + io::format_g17(g2) + ")";
      r.flag("8", tag + " admissible", "parameter point admissible", fact.valid);
      if (!fact.valid) continue;
      auto sl = pt::build_sl_problem(fact);
      auto spec = pt::solve_sl(sl, 3);
      for (std::size_t n = 0; n < 3; ++n)
        r.abs("8", tag + " n=" + std::to_string(n), "SL level vs undeformed well", sl.expected[n],
              n < spec.size() ? spec[n].energy : NAN, 1e-3, closed_form);
      if (g1 == 0.0 && g2 == 0.0) {
        double eta_dev = 0.0, beta_dev = 0.0;
        for (std::size_t i = 0; i < fact.eta.size(); ++i) {
          eta_dev = std::max(eta_dev, std::abs(fact.eta[i] - 1.0));
          beta_dev = std::max(beta_dev, std::abs(fact.beta[i] - 4.0 * std::tanh(fact.eta.x(i))));
        }
        r.below("8", "eta", "eta identically 1 at the origin", eta_dev, 1e-12, closed_form);
        r.below("8", "beta", "beta equals alpha(m+1) tanh at the origin", beta_dev, 1e-10, closed_form);
      }
    }
  }

  // 9: SUSY partner at half the γ₁ bound.
  {
    const pt::PTParams p(1.0, 3);
    auto sp = pt::susy_partner(0.5 * pt::gamma1_bound(p), p);
    auto spec = numerov_eigensolve(sp.V_tilde, 4, Kinetic::unit);
    const auto expect = pt::pt_spectrum(1.0, 4);
    for (std::size_t n = 0; n < 4; ++n)
      r.abs("9", "n=" + std::to_string(n), "partner level vs PT(m+1)", expect[n],
            n < spec.size() ? spec[n].energy : NAN, 1e-3, closed_form);
    r.below("9", "phi0", "ground-state residual", schrodinger_residual(sp.V_tilde, sp.phi0, sp.energy, Kinetic::unit),
            1e-5, property);
  }

  // 10: oscillator one-parameter family.
  {
    const Grid1D g(-10.0, 10.0, 2001);
    auto u = normalized(SampledFunction::sample(g, [](double q) { return std::exp(-0.5 * q * q); }));
    double prev = INFINITY;
    bool monotone = true;
    for (double lam : {2.0, 10.0, 1e6}) {
      auto fam = susy1d::isospectral_shift(u, lam, 0.5);
      const std::string tag = "lambda=" + io::format_g17(lam);
      r.below("10", tag + " residual", "deformed ground state residual at E=1/2",
              schrodinger_residual(fam.V_hat, fam.u_hat, 0.5), 1e-5, property);
      auto rep = susy1d::family_spectrum_check(fam, 4);
      for (std::size_t n = 0; n < 4; ++n)
        r.abs("10", tag + " n=" + std::to_string(n), "deformed level vs V_plus",
              n < rep.reference.size() ? rep.reference[n] : NAN, n < rep.deformed.size() ? rep.deformed[n] : NAN,
              1e-3, oracle);
      const double gap = sup_distance(fam.V_hat, fam.V_plus, 2);
      monotone = monotone && gap < prev;
      prev = gap;
    }
    r.flag("10", "monotone", "sup |V_hat - V_plus| decreases with lambda", monotone);
  }

  // 11: unclassified potential at α = 2.
  {
    auto u = qes::unclassified_groundstate(2.0);
    r.below("11", "residual", "analytic ground-state residual", schrodinger_residual(u.V, u.psi, u.E), 1e-6, property);
    r.abs("11", "E0", "grid ground state", 1.5, numerov_eigensolve(u.V, 1)[0].energy, 1e-4, closed_form);
  }

  // 12: Razavy recursion reproduces the even N=2, k=0 spectrum.
  {
    auto map = qes::razavy_from_qes(solved[0].problem);
    auto ER = qes::razavy_recursion_eigen(map.recursion);
    for (std::size_t i = 0; i < solved[0].energies.size(); ++i)
      r.abs("12", "E" + std::to_string(solved[0].slots[i]), "recursion root vs recurrence matrix",
            solved[0].energies[i], i < ER.size() ? ER[i] / 2.0 - map.offset : NAN, 1e-6, oracle);
  }

  // 13: E₀·(1+k) = 1 for even N = 0.
  for (const auto& row : qes::divergence_profile(qes::Parity::even, 0, {0.0, -0.5, -0.9, -0.99}))
    r.abs("13", "k=" + io::format_g17(row.k), "E0 (1+k)", 1.0, row.E0_scaled, 1e-12, closed_form);

  // 14: Taub modes and deformation.
  {
    susy2d::TaubModel m;
    auto modes = susy2d::taub_modes(m);
    r.below("14", "f1", "f1 ODE residual, omega=1", modes.residual1, 1e-5, property);
    r.below("14", "f2", "f2 ODE residual, omega=1", modes.residual2, 1e-5, property);
    auto iso = susy2d::taub_iso(m, modes);
    r.below("14", "f1_hat", "deformed f1 residual, lambda1=2", iso.residual1, 1e-4, property);
  }

  // 15: Grassmann constraints for S = q0 + q1, h = identity.
  {
    auto g = susy2d::Grid2D::standard();
    auto S = susy2d::Field2D::sample(g, [](double a, double b) { return a + b; });
    auto st = susy2d::solve_supermultiplet(S, [](double x) { return x; });
    for (const char* name : {"tetabar0", "tetabar1", "tetabar01", "tetalibre", "master+"})
      r.below("15", name, "constraint residual", st.residuals.at(name), 1e-6, property);
    auto d = susy2d::probability_density(st);
    r.flag("15", "nonnegative", "|Psi|^2 >= 0 everywhere", d.full.min() >= 0.0);
    r.below("15", "decay", "bounded density at the boundary where S is largest, relative to its maximum",
            susy2d::decay_ratio(d.bounded, S), 1e-6, property);
  }

  // 16: quasi-degenerate doublet of the odd N=2, k=5 potential.
  {
    auto dg = qes::doublet_gap(solved[3].V0, 5.0);
    r.interval("16", "gap", "relative splitting of the lowest doublet", 0.0052, dg.gap, 1e-3, 1e-2, reference_table);
  }

  r.timing("runtime", "total", "full acceptance suite wall clock", ad::seconds_since(start), 300.0);

  r.note("qes_V0", "V0 = alpha^2/2 with alpha = (4N+2)/(1+k) (even) or 4(N+1)/(1+k) (odd); the form "
                   "alpha^2 (1+k)/2 does not reproduce the tabulated energies when k != 0");
  r.note("qes_E22", "the tabulated middle level of the even N=2, k=0 case (19.0121) differs from the "
                    "recurrence-matrix value 19.1209212, which the grid eigensolver and the Razavy recursion both confirm");
  r.note("taub_denominator", "both Taub axes use (lambda + I) in the deformation denominators");
  return r;
}

}  // namespace susyqm
