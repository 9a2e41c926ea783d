#pragma once

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "susyqm/acceptance.hpp"
#include "susyqm/expr.hpp"
#include "susyqm/io.hpp"
#include "susyqm/pt_twoparam.hpp"
#include "susyqm/qes.hpp"
#include "susyqm/report.hpp"
#include "susyqm/susy1d.hpp"
#include "susyqm/susy2d.hpp"

namespace susyqm::cli {

enum class Exit : int { ok = 0, verification_failed = 1, invalid_input = 2 };

/// Settings shared by every command.
struct RunConfig {
  std::string command;
  std::optional<std::string> out;
  bool json = false;
  bool timings = false;
  std::optional<double> x_min, x_max;
  std::optional<std::size_t> n;
  double tolerance = 1e-3;
  unsigned seed = 42;

  /// --out, then SUSYQM_OUT, then ./susyqm_out.
  std::filesystem::path out_dir() const {
    if (out) return *out;
    if (const char* env = std::getenv("SUSYQM_OUT"); env && *env) return env;
    return "susyqm_out";
  }

  bool grid_overridden() const { return x_min || x_max || n; }

  Grid1D grid_or(const Grid1D& fallback) const {
    return {x_min.value_or(fallback.x_min()), x_max.value_or(fallback.x_max()), n.value_or(fallback.size())};
  }
};

/// Outcome of one command: machine JSON, the files written, and the checks.
struct Result {
  io::json data = io::json::object();
  VerificationReport report;
  std::vector<std::string> files;
};

namespace detail {

class Writer {
 public:
  Writer(std::filesystem::path dir, std::string prefix, Result& res)
      : dir_(std::move(dir)), prefix_(std::move(prefix)), res_(res) {}

  std::string name(const std::string& stem, const char* ext = ".csv") const { return prefix_ + "_" + stem + ext; }

  std::string csv(const std::string& stem, const SampledFunction& f) {
    auto n = name(stem);
    io::write_csv(dir_ / n, f);
    res_.files.push_back(n);
    return n;
  }

  std::string csv2d(const std::string& stem, const susy2d::Field2D& f) {
    const auto& g = f.grid();
    std::string s = "q0,q1,value\n";
    for (std::size_t i = 0; i < g.q0.size(); ++i)
      for (std::size_t j = 0; j < g.q1.size(); ++j) {
        s += io::format_g17(g.q0.x(i));
        s += ',';
        s += io::format_g17(g.q1.x(j));
        s += ',';
        s += io::format_g17(f(i, j));
        s += '\n';
      }
    auto n = name(stem);
    io::write_text(dir_ / n, s);
    res_.files.push_back(n);
    return n;
  }

  io::json spectrum(const std::string& stem, const Spectrum& spec) {
    auto j = io::write_spectrum(dir_, prefix_ + "_" + stem, spec);
    for (const auto& l : j["levels"]) res_.files.push_back(l["psi_file"].get<std::string>());
    return j;
  }

  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
  std::string prefix_;
  Result& res_;
};

inline io::json to_json(const std::vector<double>& v) {
  io::json a = io::json::array();
  for (double x : v) a.push_back(x);
  return a;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw io::io_error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline SampledFunction positive_seed(SampledFunction u) {
  double lo = INFINITY, hi = -INFINITY;
  for (std::size_t i = 0; i < u.size(); ++i) {
    lo = std::min(lo, u[i]);
    hi = std::max(hi, u[i]);
  }
  if (hi <= 0.0 && lo < 0.0) u = -1.0 * u;
  return normalized(u);
}

/// Ground state of V without its Dirichlet end nodes, positive and normalized.
inline std::pair<SampledFunction, double> node_free_ground(const SampledFunction& V, Kinetic kinetic) {
  auto spec = numerov_eigensolve(V, 1, kinetic);
  if (spec.size() == 0) throw invalid_input("no bound state below the asymptotic threshold");
  auto u = positive_seed(spec[0].psi.slice(1, V.size() - 2));
  return {u, spec[0].energy};
}

inline void spectral_checks(VerificationReport& r, const std::string& group, const std::string& tag,
                            const susy1d::IsospectralFamily& fam, std::size_t levels, double tol) {
  auto rep = susy1d::family_spectrum_check(fam, levels);
  for (std::size_t n = 0; n < levels; ++n)
    r.abs(group, tag + "level " + std::to_string(n), "level of V_hat vs V_plus",
          n < rep.reference.size() ? rep.reference[n] : NAN, n < rep.deformed.size() ? rep.deformed[n] : NAN, tol,
          provenance::oracle);
}

// ---------------------------------------------------------------- commands

struct PartnerArgs {
  std::string seed;
  double lambda = 2.0;
  double energy = 0.0;
  std::size_t levels = 4;
};

inline Result partner(const RunConfig& cfg, const PartnerArgs& a) {
  Result res;
  auto u = positive_seed(io::read_csv(a.seed));
  auto fam = susy1d::isospectral_shift(u, a.lambda, a.energy);
  auto pp = susy1d::partner_potentials(fam.W);
  Writer w(cfg.out_dir(), "partner", res);
  auto& r = res.report;
  r.below("partner", "seed residual", "seed state in V_plus at the seed energy",
          schrodinger_residual(fam.V_plus, fam.u, a.energy), 1e-5, provenance::property);
  r.below("partner", "u_hat residual", "deformed state in V_hat at the seed energy",
          schrodinger_residual(fam.V_hat, fam.u_hat, a.energy), 1e-5, provenance::property);
  r.abs("partner", "u_hat norm", "integral of u_hat squared", 1.0, norm_squared(fam.u_hat), 1e-6,
        provenance::closed_form);
  spectral_checks(r, "partner", "", fam, a.levels, cfg.tolerance);
  res.data = {{"lambda", a.lambda},
              {"energy", a.energy},
              {"g", fam.g},
              {"files",
               {{"W", w.csv("W", fam.W)},
                {"V_plus", w.csv("V_plus", fam.V_plus)},
                {"V_minus", w.csv("V_minus", pp.V_minus.map([&](double, double v) { return v + a.energy; }))},
                {"V_hat", w.csv("V_hat", fam.V_hat)},
                {"u_hat", w.csv("u_hat", fam.u_hat)}}}};
  return res;
}

struct IsospectralArgs {
  std::optional<std::string> potential;
  std::vector<double> lambdas = {2.0, 10.0, 1e6};
  std::size_t levels = 4;
};

inline Result isospectral(const RunConfig& cfg, const IsospectralArgs& a) {
  Result res;
  auto V = a.potential ? io::read_csv(*a.potential)
                       : SampledFunction::sample(cfg.grid_or({-10.0, 10.0, 2001}), [](double x) { return 0.5 * x * x; });
  if (a.potential && cfg.grid_overridden()) throw invalid_input("isospectral: grid options conflict with --potential");
  auto [u, E0] = node_free_ground(V, Kinetic::half);
  Writer w(cfg.out_dir(), "isospectral", res);
  auto& r = res.report;
  io::json members = io::json::array();
  std::vector<std::pair<double, double>> gaps;
  for (std::size_t i = 0; i < a.lambdas.size(); ++i) {
    const double lam = a.lambdas[i];
    auto fam = susy1d::isospectral_shift(u, lam, E0);
    const std::string tag = "lambda=" + io::format_g17(lam) + " ";
    r.below("isospectral", tag + "residual", "u_hat in V_hat at the ground energy",
            schrodinger_residual(fam.V_hat, fam.u_hat, E0), 1e-5, provenance::property);
    spectral_checks(r, "isospectral", tag, fam, a.levels, cfg.tolerance);
    const double gap = sup_distance(fam.V_hat, fam.V_plus, 2);
    gaps.emplace_back(lam, gap);
    const std::string id = std::to_string(i);
    members.push_back({{"lambda", lam},
                       {"sup_gap", gap},
                       {"V_hat", w.csv("V_hat_" + id, fam.V_hat)},
                       {"u_hat", w.csv("u_hat_" + id, fam.u_hat)},
                       {"spectrum", w.spectrum("lambda" + id + "_psi", numerov_eigensolve(fam.V_hat, a.levels))}});
    if (i == 0) res.data["V_plus"] = w.csv("V_plus", fam.V_plus);
  }
  std::vector<std::pair<double, double>> positive;
  for (auto g : gaps)
    if (g.first > 0.0) positive.push_back(g);
  std::sort(positive.begin(), positive.end());
  if (positive.size() >= 2) {
    bool mono = true;
    for (std::size_t i = 1; i < positive.size(); ++i) mono = mono && positive[i].second < positive[i - 1].second;
    r.flag("isospectral", "monotone", "sup |V_hat - V_plus| decreases as lambda grows", mono);
  }
  res.data["ground_energy"] = E0;
  res.data["members"] = members;
  return res;
}

struct PtSlArgs {
  int m = 3;
  double alpha = 1.0;
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  bool sweep = false;
};

inline void pt_point(const RunConfig& cfg, const pt::PTParams& p, double g1, double g2, VerificationReport& r,
                     const std::string& tag) {
  auto fact = pt::build_factorization(p, g1, g2, cfg.grid_or(Grid1D::standard()));
  if (!fact.valid) throw invalid_input("pt-sl: (gamma1, gamma2) = (" + io::format_g17(g1) + ", " + io::format_g17(g2) +
                                       ") not admissible: " + fact.failure);
  auto sl = pt::build_sl_problem(fact);
  auto spec = pt::solve_sl(sl, sl.expected.size());
  for (std::size_t n = 0; n < sl.expected.size(); ++n)
    r.abs("pt-sl", tag + "level " + std::to_string(n), "SL level vs undeformed Poschl-Teller", sl.expected[n],
          n < spec.size() ? spec[n].energy : NAN, cfg.tolerance, provenance::closed_form);
}

inline Result pt_sl(const RunConfig& cfg, const PtSlArgs& a) {
  Result res;
  const pt::PTParams p(a.alpha, a.m);
  const Grid1D grid = cfg.grid_or(Grid1D::standard());
  auto& r = res.report;
  auto fact = pt::build_factorization(p, a.gamma1, a.gamma2, grid);
  if (!fact.valid)
    throw invalid_input("pt-sl: (gamma1, gamma2) not admissible: " + fact.failure);
  auto sl = pt::build_sl_problem(fact);
  auto spec = pt::solve_sl(sl, sl.expected.size());
  for (std::size_t n = 0; n < sl.expected.size(); ++n)
    r.abs("pt-sl", "level " + std::to_string(n), "SL level vs undeformed Poschl-Teller", sl.expected[n],
          n < spec.size() ? spec[n].energy : NAN, cfg.tolerance, provenance::closed_form);
  auto phi0 = pt::sl_ground(sl);
  r.below("pt-sl", "phi0 residual", "zero mode in the SL equation", sl_residual(sl.p, sl.q, sl.w, phi0, sl.expected[0]),
          1e-4, provenance::property);
  auto [c1, c2] = pt::coupled_residuals(fact);
  r.below("pt-sl", "coupled 1", "first coupled equation for (eta, beta)", c1, 1e-6, provenance::property);
  r.below("pt-sl", "coupled 2", "second coupled equation for (eta, beta)", c2, 1e-6, provenance::property);

  Writer w(cfg.out_dir(), "pt-sl", res);
  io::json files = {{"eta", w.csv("eta", fact.eta)}, {"beta", w.csv("beta", fact.beta)}, {"phi0", w.csv("phi0", phi0)}};
  try {
    auto sp = pt::susy_partner(a.gamma1, p, grid);
    files["V_tilde"] = w.csv("V_tilde", sp.V_tilde);
    auto ps = numerov_eigensolve(sp.V_tilde, static_cast<std::size_t>(a.m + 1), Kinetic::unit);
    const auto expect = pt::pt_spectrum(a.alpha, a.m + 1);
    for (std::size_t n = 0; n < expect.size(); ++n)
      r.abs("pt-sl", "partner level " + std::to_string(n), "gamma2=0 partner level vs PT(m+1)", expect[n],
            n < ps.size() ? ps[n].energy : NAN, cfg.tolerance, provenance::closed_form);
  } catch (const invalid_input& e) {
    r.note("V_tilde", std::string("partner potential not built: ") + e.what());
  }
  r.note("sl_index", "the reversed product uses index m: q carries -alpha^2 m(m-1) sech^2, which makes the "
                     "undeformed SL spectrum equal -alpha^2 (m-n)^2");

  io::json sweep = io::json::array();
  if (a.sweep) {
    const double b = pt::sech_bound(a.alpha, a.m);
    for (double s1 : {-0.8, -0.4, 0.0, 0.4, 0.8})
      for (double g2 : {-0.4, 0.0, 0.3, 0.8, 1.5}) {
        const double g1 = s1 * b;
        const std::string tag = "(" + io::format_g17(g1) + "," + io::format_g17(g2) + ") ";
        try {
          pt_point(cfg, p, g1, g2, r, tag);
          sweep.push_back({{"gamma1", g1}, {"gamma2", g2}, {"admissible", true}});
        } catch (const invalid_input&) {
          sweep.push_back({{"gamma1", g1}, {"gamma2", g2}, {"admissible", false}});
        }
      }
  }
  res.data = {{"m", a.m},
              {"alpha", a.alpha},
              {"gamma1", a.gamma1},
              {"gamma2", a.gamma2},
              {"gamma1_bound", pt::gamma1_bound(p)},
              {"gamma2_condition_raw", fact.gamma2_condition_raw},
              {"gamma2_condition_normalized", fact.gamma2_condition_normalized},
              {"energies", to_json(spec.energies())},
              {"expected", to_json(sl.expected)},
              {"files", files}};
  if (a.sweep) res.data["sweep"] = sweep;
  return res;
}

struct QesArgs {
  std::string parity = "even";
  int N = 0;
  double k = 0.0;
  bool verify = false;
};

inline Result qes_cmd(const RunConfig& cfg, const QesArgs& a) {
  Result res;
  const qes::QESProblem p(qes::parse_parity(a.parity), a.N, a.k);
  std::optional<Grid1D> grid;
  if (cfg.grid_overridden()) grid = cfg.grid_or(Grid1D::standard());
  auto s = qes::qes_solve(p, grid);
  Writer w(cfg.out_dir(), "qes", res);

  Spectrum spec;
  for (std::size_t i = 0; i < s.energies.size(); ++i) spec.levels.push_back({s.energies[i], s.psi[i]});
  spec.requested = spec.size();
  io::json roots = io::json::array(), residuals = io::json::array();
  for (std::size_t i = 0; i < s.energies.size(); ++i) {
    io::json lr = io::json::array();
    for (auto z : s.roots[i]) lr.push_back({z.real(), z.imag()});
    roots.push_back(lr);
    residuals.push_back(schrodinger_residual(s.potential, s.psi[i], s.energies[i]));
  }
  io::json slots = io::json::array();
  for (int n : s.slots) slots.push_back(n);
  res.data = {{"parity", a.parity},
              {"N", a.N},
              {"k", a.k},
              {"alpha", s.alpha},
              {"V0", s.V0},
              {"energies", to_json(s.energies)},
              {"slots", slots},
              {"roots", roots},
              {"residuals", residuals},
              {"sum_rule_residuals", to_json(s.sum_rule_residuals)},
              {"potential", w.csv("potential", s.potential)}};
  res.data.update(w.spectrum("psi", spec));

  if (a.verify) {
    auto& r = res.report;
    auto grid_levels = qes::oracle_slot_energies(s);
    for (std::size_t i = 0; i < s.energies.size(); ++i) {
      const std::string tag = "n=" + std::to_string(s.slots[i]) + " ";
      r.below("qes", tag + "residual", "eigenfunction residual", residuals[i].get<double>(), 1e-5, provenance::property);
      r.abs("qes", tag + "grid", "grid eigenvalue at the parity slot", s.energies[i], grid_levels[i], cfg.tolerance,
            provenance::oracle);
      r.below("qes", tag + "sum rule", "energy from the polynomial roots", s.sum_rule_residuals[i], 1e-8,
              provenance::closed_form);
      if (a.N > 0) {
        try {
          r.below("qes", tag + "bethe", "root equations", qes::bethe_root_residual(s, i), 1e-6, provenance::property);
        } catch (const invalid_input& e) {
          r.note("bethe " + tag, e.what());
        }
      }
    }
    r.note("V0", "V0 = alpha^2/2 with alpha = (4N+2)/(1+k) even, 4(N+1)/(1+k) odd");
  }
  return res;
}

struct RazavyArgs {
  double zeta = 1.0;
  int n = 0;
  int sigma = 1;
  int eta = 0;
};

/// Symmetric box on which ½(ζ cosh 2x − M)² exceeds the top level by a wide
/// margin and e^{−(ζ/2)cosh 2x} has decayed.
inline Grid1D razavy_grid(double zeta, double M, double top, int n) {
  double L = 1.0;
  for (; L < 12.0; L += 0.05) {
    const double c = std::cosh(2.0 * L);
    const double t = zeta * c - M;
    if (t > 0.0 && 0.5 * t * t >= top + 200.0 && 0.5 * zeta * c - 2.0 * (n + 1) * L >= 40.0) break;
  }
  return {-L, L, 4001};
}

inline Result razavy(const RunConfig& cfg, const RazavyArgs& a) {
  Result res;
  if (!(a.zeta > 0.0)) throw invalid_input("razavy: zeta must be positive for bound states");
  const qes::RazavyRecursion rec(a.zeta, a.n, a.sigma, a.eta);
  auto ER = qes::razavy_recursion_eigen(rec);
  const Grid1D grid = cfg.grid_overridden() ? cfg.grid_or(Grid1D::standard())
                                            : razavy_grid(a.zeta, rec.M(), ER.back() / 2.0, a.n);
  auto V = qes::razavy_potential(grid, a.zeta, rec.M());
  Writer w(cfg.out_dir(), "razavy", res);
  auto& r = res.report;
  Spectrum spec;
  auto numerov = numerov_eigensolve(V, static_cast<std::size_t>(2 * a.n + 4));
  for (std::size_t i = 0; i < ER.size(); ++i) {
    auto psi = qes::finkel_eigenfunction(rec, ER[i], grid);
    const double E = ER[i] / 2.0;
    spec.levels.push_back({E, psi});
    const std::string tag = "E_R=" + io::format_g17(ER[i]) + " ";
    r.below("razavy", tag + "residual", "Finkel eigenfunction residual", schrodinger_residual(V, psi, E), 1e-4,
            provenance::property);
    double nearest = NAN;
    for (const auto& l : numerov.levels)
      if (!(std::abs(l.energy - E) >= std::abs(nearest - E))) nearest = l.energy;
    r.abs("razavy", tag + "grid", "nearest grid eigenvalue", E, nearest, cfg.tolerance, provenance::oracle);
  }
  spec.requested = spec.size();
  res.data = {{"zeta", a.zeta},
              {"n", a.n},
              {"sigma", a.sigma},
              {"eta", a.eta},
              {"M", rec.M()},
              {"E_R", to_json(ER)},
              {"potential", w.csv("potential", V)}};
  res.data.update(w.spectrum("psi", spec));
  return res;
}

struct TaubArgs {
  double omega = 1.0;
  double lambda1 = 2.0;
  double lambda2 = 2.0;
};

inline Result taub(const RunConfig& cfg, const TaubArgs& a) {
  Result res;
  susy2d::TaubModel m;
  m.omega = a.omega;
  m.lambda1 = a.lambda1;
  m.lambda2 = a.lambda2;
  if (cfg.grid_overridden()) m.grid1 = m.grid2 = cfg.grid_or(m.grid1);
  auto modes = susy2d::taub_modes(m);
  auto iso = susy2d::taub_iso(m, modes);
  auto& r = res.report;
  r.below("taub", "f1", "f1 separated-equation residual", modes.residual1, 1e-5, provenance::property);
  r.below("taub", "f2", "f2 separated-equation residual", modes.residual2, 1e-5, provenance::property);
  r.below("taub", "f1_hat", "deformed f1 residual", iso.residual1, 1e-4, provenance::property);
  r.below("taub", "f2_hat", "deformed f2 residual", iso.residual2, 1e-4, provenance::property);
  r.note("denominator", "both axes use (lambda + I) in the deformation denominators");
  Writer w(cfg.out_dir(), "taub", res);
  res.data = {{"omega", a.omega},
              {"lambda1", a.lambda1},
              {"lambda2", a.lambda2},
              {"E1", modes.E1},
              {"E2", modes.E2},
              {"seed_gap1", iso.seed_gap1},
              {"seed_gap2", iso.seed_gap2},
              {"window1", {iso.family1.u.grid().x_min(), iso.family1.u.grid().x_max()}},
              {"window2", {iso.family2.u.grid().x_min(), iso.family2.u.grid().x_max()}},
              {"files",
               {{"f1", w.csv("f1", modes.f1)},
                {"f2", w.csv("f2", modes.f2)},
                {"V_hat1", w.csv("V_hat1", iso.family1.V_hat)},
                {"V_hat2", w.csv("V_hat2", iso.family2.V_hat)},
                {"f_hat1", w.csv("f_hat1", iso.family1.u_hat)},
                {"f_hat2", w.csv("f_hat2", iso.family2.u_hat)}}}};
  return res;
}

struct GrassmannArgs {
  std::string superpotential;
  std::string h = "xi";
  double direction = 1.0;
  double a_plus = 1.0;
  double a_minus = 1.0;
};

inline Result grassmann(const RunConfig& cfg, const GrassmannArgs& a) {
  Result res;
  if (a.direction != 1.0 && a.direction != -1.0) throw invalid_input("grassmann: --direction must be 1 or -1");
  auto S_expr = expr::Expression::parse(read_file(a.superpotential), {"q0", "q1"});
  auto h_expr = expr::Expression::parse(a.h, {"xi"});
  auto g = susy2d::Grid2D::standard();
  if (cfg.grid_overridden()) g.q0 = g.q1 = cfg.grid_or(g.q0);
  auto S = susy2d::Field2D::sample(g, [&](double x, double y) { return S_expr(x, y); });
  if (!std::isfinite(S.max_abs())) throw invalid_input("grassmann: superpotential is not finite on the grid");
  auto st = susy2d::solve_supermultiplet(S, [&](double x) { return h_expr(x); }, a.direction, a.a_plus, a.a_minus);
  auto& r = res.report;
  for (const char* name : {"tetabar0", "tetabar1", "tetabar01", "tetalibre", "master+"})
    r.below("grassmann", name, "constraint residual", st.residuals.at(name), 1e-6, provenance::property);
  auto d = susy2d::probability_density(st);
  r.flag("grassmann", "nonnegative", "|Psi|^2 >= 0 everywhere", d.full.min() >= 0.0);
  Writer w(cfg.out_dir(), "grassmann", res);
  io::json resid = io::json::object();
  for (const auto& [k, v] : st.residuals) resid[k] = v;
  res.data = {{"residuals", resid},
              {"decay_ratio", susy2d::decay_ratio(d.bounded, S)},
              {"direction", a.direction},
              {"density", w.csv2d("density", d.full)},
              {"density_bounded", w.csv2d("density_bounded", d.bounded)}};
  return res;
}

inline Result verify(const RunConfig&) {
  Result res;
  res.report = run_acceptance();
  io::json crit = io::json::object();
  for (const auto& [g, pass] : res.report.groups()) crit[g] = pass;
  res.data = {{"criteria", crit}};
  return res;
}

inline void print_human(std::ostream& os, const std::string& command, const Result& res,
                        const std::filesystem::path& report_path) {
  const auto& checks = res.report.checks();
  for (const auto& c : checks) {
    os << (c.pass ? "  pass  " : "  FAIL  ") << c.group << " | " << c.id << ": observed "
       << io::format_e12(c.observed);
    if (c.kind == "interval")
      os << " in (" << io::format_e12(c.lower) << ", " << io::format_e12(c.upper) << ")";
    else if (c.kind == "abs")
      os << " expected " << io::format_e12(c.expected) << " tol " << io::format_e12(c.tolerance);
    else
      os << " limit " << io::format_e12(c.tolerance);
    os << "\n";
  }
  os << command << ": " << res.files.size() << " data files, report " << report_path.string() << "\n";
  if (!checks.empty()) os << command << ": " << (res.report.overall() ? "all checks passed" : "verification FAILED") << "\n";
}

}  // namespace detail

/// Runs one command line. argv[0] is the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Supersymmetric quantum mechanics constructions with grid cross-checks", "susyqm"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.add_option("--out", cfg.out, "Output directory (overrides SUSYQM_OUT)");
  app.add_flag("--json", cfg.json, "Print machine JSON on stdout");
  app.add_flag("--timings", cfg.timings, "Include wall-clock values in report JSON");
  app.add_option("--x-min", cfg.x_min, "Grid lower end");
  app.add_option("--x-max", cfg.x_max, "Grid upper end");
  app.add_option("--n", cfg.n, "Grid node count")->check(CLI::Range(std::size_t{16}, std::size_t{2000000}));
  app.add_option("--tolerance", cfg.tolerance, "Spectral match tolerance")->check(CLI::PositiveNumber);
  app.add_option("--rng-seed", cfg.seed, "Seed for randomized test vectors");

  detail::PartnerArgs pa;
  auto* partner = app.add_subcommand("partner", "Partner potentials and one deformed member from a seed state");
  partner->add_option("--seed", pa.seed, "CSV (x,value) of a node-free seed state")->required();
  partner->add_option("--lambda", pa.lambda, "Deformation parameter, outside [-1, 0]");
  partner->add_option("--energy", pa.energy, "Seed energy");
  partner->add_option("--levels", pa.levels, "Levels compared")->check(CLI::Range(1, 50));

  detail::IsospectralArgs ia;
  auto* iso = app.add_subcommand("isospectral", "Isospectral family of a potential (oscillator by default)");
  iso->add_option("--potential", ia.potential, "CSV (x,value) potential");
  iso->add_option("--lambda", ia.lambdas, "Deformation parameters")->expected(1, -1);
  iso->add_option("--levels", ia.levels, "Levels compared")->check(CLI::Range(1, 50));

  detail::PtSlArgs pt_args;
  auto* ptsl = app.add_subcommand("pt-sl", "Two-parameter Poschl-Teller factorization and its SL operator");
  ptsl->add_option("--m", pt_args.m, "Well index")->check(CLI::Range(1, 50));
  ptsl->add_option("--alpha", pt_args.alpha, "Inverse width")->check(CLI::PositiveNumber);
  ptsl->add_option("--gamma1", pt_args.gamma1, "First deformation parameter");
  ptsl->add_option("--gamma2", pt_args.gamma2, "Second deformation parameter");
  ptsl->add_flag("--sweep", pt_args.sweep, "Also check a 5x5 parameter sample");

  detail::QesArgs qa;
  auto* qesc = app.add_subcommand("qes", "Quasi-exactly solvable sinh potential");
  qesc->add_option("--parity", qa.parity, "even or odd")->check(CLI::IsMember({"even", "odd"}));
  qesc->add_option("--N", qa.N, "Polynomial degree")->check(CLI::Range(0, 200));
  qesc->add_option("--k", qa.k, "Potential parameter, > -1");
  qesc->add_flag("--verify", qa.verify, "Cross-check every level");

  detail::RazavyArgs ra;
  auto* raz = app.add_subcommand("razavy", "Razavy three-term recursion");
  raz->add_option("--zeta", ra.zeta, "Potential strength");
  raz->add_option("--n", ra.n, "Polynomial degree")->check(CLI::Range(0, 200));
  raz->add_option("--sigma", ra.sigma, "Sector sigma")->check(CLI::IsMember({-1, 0, 1}));
  raz->add_option("--eta", ra.eta, "Sector eta")->check(CLI::IsMember({-1, 0, 1}));

  detail::TaubArgs ta;
  auto* taubc = app.add_subcommand("taub", "Taub minisuperspace modes and their deformations");
  taubc->add_option("--omega", ta.omega, "Separation constant");
  taubc->add_option("--lambda1", ta.lambda1, "Deformation parameter, first axis");
  taubc->add_option("--lambda2", ta.lambda2, "Deformation parameter, second axis");

  detail::GrassmannArgs ga;
  auto* gr = app.add_subcommand("grassmann", "Supermultiplet constraints for a superpotential S(q0, q1)");
  gr->add_option("--superpotential", ga.superpotential, "File holding an expression in q0, q1")->required();
  gr->add_option("--seed-function", ga.h, "Expression in xi = q0 + direction*q1 giving f+");
  gr->add_option("--direction", ga.direction, "Null direction, 1 or -1");
  gr->add_option("--a-plus", ga.a_plus, "Coefficient of A+");
  gr->add_option("--a-minus", ga.a_minus, "Coefficient of A-");

  auto* ver = app.add_subcommand("verify", "Run the full acceptance suite");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return static_cast<int>(Exit::ok);
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return static_cast<int>(Exit::ok);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return static_cast<int>(Exit::invalid_input);
  }

  try {
    if (cfg.x_min && cfg.x_max && !(*cfg.x_max > *cfg.x_min)) throw invalid_input("--x-max must exceed --x-min");
    Result res;
    cfg.command = app.get_subcommands().front()->get_name();
    if (*partner) res = detail::partner(cfg, pa);
    else if (*iso) res = detail::isospectral(cfg, ia);
    else if (*ptsl) res = detail::pt_sl(cfg, pt_args);
    else if (*qesc) res = detail::qes_cmd(cfg, qa);
    else if (*raz) res = detail::razavy(cfg, ra);
    else if (*taubc) res = detail::taub(cfg, ta);
    else if (*gr) res = detail::grassmann(cfg, ga);
    else if (*ver) res = detail::verify(cfg);

    io::json doc = res.data;
    doc["command"] = cfg.command;
    doc["report"] = res.report.to_json(cfg.timings);
    const auto path = cfg.out_dir() / (cfg.command + ".json");
    io::write_json(path, doc);
    if (cfg.json)
      out << io::to_json_text(doc);
    else
      detail::print_human(out, cfg.command, res, path);
    return static_cast<int>(res.report.overall() ? Exit::ok : Exit::verification_failed);
  } catch (const invalid_input& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(Exit::invalid_input);
  } catch (const std::exception& e) {
    err << "computation failed: " << e.what() << "\n";
    return static_cast<int>(Exit::verification_failed);
  }
}

}  // namespace susyqm::cli
