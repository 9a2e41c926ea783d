#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <initializer_list>
#include <map>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "susyqm/calculus.hpp"
#include "susyqm/eigensolve.hpp"
#include "susyqm/grid.hpp"
#include "susyqm/special.hpp"
#include "susyqm/susy1d.hpp"

namespace susyqm::susy2d {

struct Grid2D {
  Grid1D q0;
  Grid1D q1;

  /// [−3, 3]² with 241 nodes per axis.
  static Grid2D standard() { return {{-3.0, 3.0, 241}, {-3.0, 3.0, 241}}; }

  std::size_t size() const noexcept { return q0.size() * q1.size(); }
  std::size_t index(std::size_t i, std::size_t j) const noexcept { return i * q1.size() + j; }
  friend bool operator==(const Grid2D&, const Grid2D&) = default;
};

/// Real field on a Grid2D, row-major with q⁰ as the slow index.
class Field2D {
 public:
  explicit Field2D(Grid2D g) : grid_(g), v_(g.size(), 0.0) {}
  Field2D(Grid2D g, std::vector<double> v) : grid_(g), v_(std::move(v)) {
    if (v_.size() != grid_.size()) throw invalid_input("Field2D: value count does not match grid");
  }

  template <class F>
  static Field2D sample(const Grid2D& g, F&& f) {
    Field2D out(g);
    for (std::size_t i = 0; i < g.q0.size(); ++i)
      for (std::size_t j = 0; j < g.q1.size(); ++j) out.v_[g.index(i, j)] = f(g.q0.x(i), g.q1.x(j));
    return out;
  }

  const Grid2D& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return v_.size(); }
  const std::vector<double>& values() const noexcept { return v_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return v_[grid_.index(i, j)]; }
  double& operator()(std::size_t i, std::size_t j) noexcept { return v_[grid_.index(i, j)]; }

  double max_abs() const noexcept {
    double m = 0.0;
    for (double x : v_) m = std::max(m, std::abs(x));
    return m;
  }
  double min() const noexcept { return *std::min_element(v_.begin(), v_.end()); }

  template <class F>
  Field2D map(F&& f) const {
    Field2D out(grid_);
    for (std::size_t k = 0; k < v_.size(); ++k) out.v_[k] = f(v_[k]);
    return out;
  }

  /// Applies a 1D operator to every line along `axis` (0 = q⁰, 1 = q¹).
  template <class Op>
  Field2D along(int axis, Op&& op) const {
    Field2D out(grid_);
    const Grid1D& g = axis == 0 ? grid_.q0 : grid_.q1;
    const std::size_t lines = axis == 0 ? grid_.q1.size() : grid_.q0.size();
    std::vector<double> buf(g.size());
    for (std::size_t l = 0; l < lines; ++l) {
      for (std::size_t k = 0; k < g.size(); ++k) buf[k] = axis == 0 ? (*this)(k, l) : (*this)(l, k);
      SampledFunction r = op(SampledFunction(g, buf));
      for (std::size_t k = 0; k < g.size(); ++k) (axis == 0 ? out(k, l) : out(l, k)) = r[k];
    }
    return out;
  }

  Field2D d(int axis, int order = 1) const {
    return along(axis, [order](const SampledFunction& f) { return differentiate(f, order); });
  }

  friend Field2D operator+(const Field2D& a, const Field2D& b) { return zip(a, b, std::plus<>()); }
  friend Field2D operator-(const Field2D& a, const Field2D& b) { return zip(a, b, std::minus<>()); }
  friend Field2D operator*(const Field2D& a, const Field2D& b) { return zip(a, b, std::multiplies<>()); }
  friend Field2D operator*(double s, const Field2D& a) {
    return a.map([s](double x) { return s * x; });
  }

 private:
  template <class Op>
  static Field2D zip(const Field2D& a, const Field2D& b, Op op) {
    if (!(a.grid_ == b.grid_)) throw invalid_input("Field2D: grid mismatch");
    Field2D out(a.grid_);
    for (std::size_t k = 0; k < a.v_.size(); ++k) out.v_[k] = op(a.v_[k], b.v_[k]);
    return out;
  }

  Grid2D grid_;
  std::vector<double> v_;
};

// ---------------------------------------------------------------- Taub model

/// Separated Wheeler–DeWitt equation of the Taub model in x₁ = 4α − 8β,
/// x₂ = 4α − 2β: −f₁'' + e^{x₁}f₁/144 = (ω²/4) f₁, −f₂'' + e^{x₂}f₂/9 = ω² f₂.
struct TaubModel {
  double omega = 1.0;
  double lambda1 = 2.0;
  double lambda2 = 2.0;
  Grid1D grid1{-8.0, 4.0, 3001};
  Grid1D grid2{-8.0, 4.0, 3001};
};

struct TaubModes {
  SampledFunction f1;
  SampledFunction f2;
  SampledFunction V1;
  SampledFunction V2;
  double E1;
  double E2;
  double residual1;
  double residual2;
};

/// max over interior nodes with |f| > 1e-10·max|f| of |−f'' + (V − E)f| / max|f|.
inline double masked_residual(const SampledFunction& V, const SampledFunction& f, double E,
                              Kinetic kinetic = Kinetic::unit) {
  const double scale = f.max_abs();
  if (!(scale > 0.0)) throw invalid_input("masked_residual: function vanishes identically");
  auto d2 = differentiate(f, 2);
  const double k = kappa(kinetic);
  double r = 0.0;
  for (std::size_t i = 2; i + 2 < f.size(); ++i)
    if (std::abs(f[i]) > 1e-10 * scale) r = std::max(r, std::abs(-k * d2[i] + (V[i] - E) * f[i]));
  return r / scale;
}

inline TaubModes taub_modes(const TaubModel& m) {
  if (!(m.omega > 0.0) || !std::isfinite(m.omega))
    throw invalid_input("taub_modes: omega must be positive (omega = 0 hits the sinh pole of L)");
  const double w = m.omega;
  auto f1 = SampledFunction::sample(m.grid1, [w](double x) { return special::bessel_k_imag(w, std::exp(0.5 * x) / 6.0); });
  auto f2 = SampledFunction::sample(m.grid2, [w](double x) {
    const double z = 2.0 * std::exp(0.5 * x) / 3.0;
    return special::bessel_l_imag(2.0 * w, z) + special::bessel_k_imag(2.0 * w, z);
  });
  auto V1 = SampledFunction::sample(m.grid1, [](double x) { return std::exp(x) / 144.0; });
  auto V2 = SampledFunction::sample(m.grid2, [](double x) { return std::exp(x) / 9.0; });
  const double E1 = 0.25 * w * w, E2 = w * w;
  const double r1 = masked_residual(V1, f1, E1);
  const double r2 = masked_residual(V2, f2, E2);
  return {std::move(f1), std::move(f2), std::move(V1), std::move(V2), E1, E2, r1, r2};
}

/// Node-free working window of a mode: starts past the last sign change,
/// where |f| has recovered to 1% of its maximum on the remaining tail, and
/// runs to the upper grid end.
inline std::pair<std::size_t, std::size_t> node_free_window(const SampledFunction& f) {
  const std::size_t n = f.size();
  std::size_t start = 0;
  for (std::size_t i = 1; i < n; ++i)
    if ((f[i] > 0.0) != (f[i - 1] > 0.0) || f[i] == 0.0) start = i;
  double peak = 0.0;
  for (std::size_t i = start; i < n; ++i) peak = std::max(peak, std::abs(f[i]));
  while (start < n && std::abs(f[start]) < 1e-2 * peak) ++start;
  if (n - start < 2 * Grid1D::min_nodes) throw invalid_input("taub_iso: no node-free window on the grid");
  return {start, n - 1};
}

struct TaubIso {
  std::pair<std::size_t, std::size_t> window1;
  std::pair<std::size_t, std::size_t> window2;
  susy1d::IsospectralFamily family1;
  susy1d::IsospectralFamily family2;
  double residual1;  // f̂₁ in −f'' + V̂₁f = E₁f
  double residual2;
  double seed_gap1;  // sup |V̂₁ − V₊₁| on the window
  double seed_gap2;
};

/// Darboux deformation of each mode on its node-free window, with the
/// unit kinetic term of the separated equations: V̂ = V − 2(f²/(λ+I))',
/// f̂ = C f/(λ+I). Both axes use λ + I in the denominators.
inline TaubIso taub_iso(const TaubModel& m, const TaubModes& modes) {
  auto build = [](const SampledFunction& f, const SampledFunction& V, double lambda, double E) {
    auto w = node_free_window(f);
    auto u = f.slice(w.first, w.second);
    if (u[0] < 0.0) u = -1.0 * u;
    auto Vw = V.slice(w.first, w.second);
    auto fam = susy1d::darboux_family(u, lambda, E, Kinetic::unit, &Vw);
    const double r = schrodinger_residual(fam.V_hat, fam.u_hat, E, Kinetic::unit);
    return std::tuple{w, fam, r, sup_distance(fam.V_hat, fam.V_plus, 2)};
  };
  auto [w1, fam1, r1, g1] = build(modes.f1, modes.V1, m.lambda1, modes.E1);
  auto [w2, fam2, r2, g2] = build(modes.f2, modes.V2, m.lambda2, modes.E2);
  return {w1, w2, std::move(fam1), std::move(fam2), r1, r2, g1, g2};
}

// ------------------------------------------------------- Grassmann components

/// Diagonal minisuperspace metric η^{μν}.
struct Metric {
  double eta00 = -1.0;
  double eta11 = 1.0;
};

/// θ-expansion Ψ = A₊ + B₀θ⁰ + B₁θ¹ + A₋θ⁰θ¹ with its constraint residuals.
struct SupermultipletState {
  Field2D S;
  Field2D f_plus;
  Field2D A_plus;
  Field2D B0;
  Field2D B1;
  Field2D A_minus;
  std::map<std::string, double> residuals;
};

namespace detail {

/// max|Σ terms| / max over terms of max|term|; zero when every term vanishes.
inline double balance(std::initializer_list<Field2D> terms) {
  double scale = 0.0;
  for (const auto& t : terms) scale = std::max(scale, t.max_abs());
  if (scale == 0.0) return 0.0;
  Field2D sum(terms.begin()->grid());
  for (const auto& t : terms) sum = sum + t;
  return sum.max_abs() / scale;
}

}  // namespace detail

/// Residuals of the component equations from Q̄Ψ = 0 and QΨ = 0, each
/// normalized by the largest single term in the equation.
inline std::map<std::string, double> constraint_residuals(const SupermultipletState& s, Metric eta = {}) {
  auto S0 = s.S.d(0), S1 = s.S.d(1);
  auto f0 = s.f_plus.d(0), f1 = s.f_plus.d(1);
  std::map<std::string, double> r;
  r["tetabar0"] = detail::balance({s.A_plus.d(0), -1.0 * (s.A_plus * S0)});
  r["tetabar1"] = detail::balance({s.A_plus.d(1), -1.0 * (s.A_plus * S1)});
  r["tetabar01"] = detail::balance({s.B1.d(0), -1.0 * (s.B1 * S0), -1.0 * s.B0.d(1), s.B0 * S1});
  r["teta0"] = detail::balance({s.A_minus.d(1), s.A_minus * S1});
  r["teta1"] = detail::balance({s.A_minus.d(0), s.A_minus * S0});
  r["tetalibre"] = detail::balance({eta.eta00 * s.B0.d(0), eta.eta00 * (s.B0 * S0), eta.eta11 * s.B1.d(1),
                                    eta.eta11 * (s.B1 * S1)});
  r["master+"] = detail::balance({eta.eta00 * s.f_plus.d(0, 2), eta.eta11 * s.f_plus.d(1, 2),
                                  2.0 * eta.eta00 * (S0 * f0), 2.0 * eta.eta11 * (S1 * f1)});
  return r;
}

/// A± = a± e^{±S}, f₊ = h(q⁰ + s q¹), B_μ = e^{−S} ∂_μ f₊.
inline SupermultipletState solve_supermultiplet(const Field2D& S, const std::function<double(double)>& h,
                                                double s = 1.0, double a_plus = 1.0, double a_minus = 1.0,
                                                Metric eta = {}) {
  const auto& g = S.grid();
  auto f = Field2D::sample(g, [&](double q0, double q1) { return h(q0 + s * q1); });
  auto em = S.map([](double v) { return std::exp(-v); });
  SupermultipletState st{S,
                         f,
                         S.map([a_plus](double v) { return a_plus * std::exp(v); }),
                         em * f.d(0),
                         em * f.d(1),
                         a_minus * em,
                         {}};
  st.residuals = constraint_residuals(st, eta);
  return st;
}

struct Density {
  Field2D full;     // A₊² + B₀² + B₁² + A₋²
  Field2D bounded;  // e^{−2S} terms only: B₀² + B₁² + A₋²
};

inline Density probability_density(const SupermultipletState& s) {
  auto bounded = s.B0 * s.B0 + s.B1 * s.B1 + s.A_minus * s.A_minus;
  return {s.A_plus * s.A_plus + bounded, bounded};
}

/// Largest value of `f` on the boundary nodes where S attains its boundary
/// maximum, relative to max|f| over the grid.
inline double decay_ratio(const Field2D& f, const Field2D& S) {
  const auto& g = f.grid();
  const std::size_t n0 = g.q0.size(), n1 = g.q1.size();
  std::vector<std::pair<std::size_t, std::size_t>> edge;
  for (std::size_t i = 0; i < n0; ++i)
    for (std::size_t j = 0; j < n1; ++j)
      if (i == 0 || j == 0 || i + 1 == n0 || j + 1 == n1) edge.emplace_back(i, j);
  double smax = -INFINITY;
  for (auto [i, j] : edge) smax = std::max(smax, S(i, j));
  const double tol = 1e-12 * std::max(1.0, std::abs(smax));
  double top = 0.0;
  for (auto [i, j] : edge)
    if (S(i, j) >= smax - tol) top = std::max(top, std::abs(f(i, j)));
  const double scale = f.max_abs();
  return scale > 0.0 ? top / scale : 0.0;
}

// --------------------------------------------------- separable factorization

/// Supervector (ψ₁, ψ₂, ψ₃, ψ₄) of fields on the product grid.
using SuperVector = std::array<Field2D, 4>;

struct SeparableReport {
  Grid2D grid;              // product grid of the operator checks
  SampledFunction W;        // −u₁'/u₁
  SampledFunction Z;        // −u₂'/u₂
  double C0_x;              // V₁ − ½(W² − W')
  double C0_y;              // V₂ − ½(Z² − Z')
  std::array<std::vector<double>, 4> block_spectra;  // a⁻a⁺, b⁻b⁺, a⁺a⁻, b⁺b⁻
  double anticommutator;    // ½{Q⁺,Q⁻} against the block Hamiltonian
  double nilpotency;        // {Q⁻,Q⁻} and {Q⁺,Q⁺}
  double commutator;        // [Q⁻, H] and [Q⁺, H]
};

namespace detail {

struct AxisFactor {
  SampledFunction W;
  SampledFunction V_plus;
  SampledFunction V_minus;
  double C0;
};

inline std::pair<std::size_t, std::size_t> resolved_window(const SampledFunction& u) {
  const double peak = u.max_abs();
  std::size_t a = 0, b = u.size() - 1;
  while (a < b && std::abs(u[a]) < 1e-6 * peak) ++a;
  while (b > a && std::abs(u[b]) < 1e-6 * peak) --b;
  if (b - a < 2 * Grid1D::min_nodes) throw invalid_input("separable_2d_factorization: ground state not resolved");
  return {a, b};
}

inline AxisFactor axis_factor(const SampledFunction& u, const SampledFunction& V) {
  auto W = susy1d::superpotential_from_state(u);
  auto pair = susy1d::partner_potentials(W);
  double c0 = 0.0;
  std::size_t cnt = 0;
  for (std::size_t i = 3; i + 3 < u.size(); ++i, ++cnt) c0 += V[i] - pair.V_plus[i];
  return {W, pair.V_plus, pair.V_minus, c0 / static_cast<double>(cnt)};
}

/// Every `stride`-th node of f.
inline SampledFunction thin(const SampledFunction& f, std::size_t stride) {
  const std::size_t last = (f.size() - 1) / stride * stride;
  std::vector<double> v;
  for (std::size_t i = 0; i <= last; i += stride) v.push_back(f[i]);
  return {f.grid().subgrid(0, last, stride), std::move(v)};
}

inline AxisFactor thin(const AxisFactor& a, std::size_t max_nodes) {
  const std::size_t stride = std::max<std::size_t>(1, (a.W.size() - 1 + max_nodes - 2) / (max_nodes - 1));
  return {thin(a.W, stride), thin(a.V_plus, stride), thin(a.V_minus, stride), a.C0};
}

inline SampledFunction lower(const SampledFunction& W, const SampledFunction& f) {
  return std::sqrt(0.5) * (differentiate(f, 1) + W * f);
}
inline SampledFunction raise(const SampledFunction& W, const SampledFunction& f) {
  return std::sqrt(0.5) * (W * f - differentiate(f, 1));
}
inline SampledFunction hamiltonian(const SampledFunction& V, const SampledFunction& f) {
  return -0.5 * differentiate(f, 2) + V * f;
}

/// max|ψ_c| over all components, skipping `margin` nodes at every edge.
inline double super_max(const SuperVector& v, std::size_t margin = 6) {
  double m = 0.0;
  for (const auto& c : v) {
    const auto& g = c.grid();
    for (std::size_t i = margin; i + margin < g.q0.size(); ++i)
      for (std::size_t j = margin; j + margin < g.q1.size(); ++j) m = std::max(m, std::abs(c(i, j)));
  }
  return m;
}

inline SuperVector minus(const SuperVector& a, const SuperVector& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]};
}

}  // namespace detail

/// Two-dimensional separable factorization. Ground states of V₁, V₂ give
/// W and Z; the 4×4 supercharges Q⁻ = √2 (a⁻ ψ₃, b⁻ ψ₄, 0, 0) and
/// Q⁺ = √2 (0, 0, a⁺ ψ₁, b⁺ ψ₂) are applied to `tests` random smooth
/// supervectors drawn with `seed` on the central window.
inline SeparableReport separable_2d_factorization(const SampledFunction& V1, const SampledFunction& V2,
                                                  std::size_t tests = 5, unsigned seed = 42,
                                                  std::size_t levels = 4) {
  auto g1 = numerov_eigensolve(V1, 1);
  auto g2 = numerov_eigensolve(V2, 1);
  if (g1.size() == 0 || g2.size() == 0) throw invalid_input("separable_2d_factorization: no bound ground state");
  if (sign_changes(g1[0].psi) != 0 || sign_changes(g2[0].psi) != 0)
    throw invalid_input("separable_2d_factorization: ground state has nodes");
  auto w1 = detail::resolved_window(g1[0].psi);
  auto w2 = detail::resolved_window(g2[0].psi);
  auto ax = detail::axis_factor(g1[0].psi.slice(w1.first, w1.second), V1.slice(w1.first, w1.second));
  auto ay = detail::axis_factor(g2[0].psi.slice(w2.first, w2.second), V2.slice(w2.first, w2.second));
  SeparableReport rep{{ax.W.grid(), ay.W.grid()}, ax.W, ay.W, ax.C0, ay.C0, {}, 0.0, 0.0, 0.0};
  rep.block_spectra[0] = numerov_eigensolve(ax.V_minus, levels).energies();
  rep.block_spectra[1] = numerov_eigensolve(ay.V_minus, levels).energies();
  rep.block_spectra[2] = numerov_eigensolve(ax.V_plus, levels).energies();
  rep.block_spectra[3] = numerov_eigensolve(ay.V_plus, levels).energies();

  // Operator identities are checked on a product grid of at most 201² nodes.
  ax = detail::thin(ax, 201);
  ay = detail::thin(ay, 201);
  Grid2D grid{ax.W.grid(), ay.W.grid()};
  rep.grid = grid;

  const double r2 = std::sqrt(2.0);
  auto ax_op = [](const Field2D& f, auto op) { return f.along(0, op); };
  auto ay_op = [](const Field2D& f, auto op) { return f.along(1, op); };
  auto am = [&](const SampledFunction& f) { return detail::lower(ax.W, f); };
  auto ap = [&](const SampledFunction& f) { return detail::raise(ax.W, f); };
  auto bm = [&](const SampledFunction& f) { return detail::lower(ay.W, f); };
  auto bp = [&](const SampledFunction& f) { return detail::raise(ay.W, f); };
  auto Q_minus = [&](const SuperVector& v) {
    Field2D z(grid);
    return SuperVector{r2 * ax_op(v[2], am), r2 * ay_op(v[3], bm), z, z};
  };
  auto Q_plus = [&](const SuperVector& v) {
    Field2D z(grid);
    return SuperVector{z, z, r2 * ax_op(v[0], ap), r2 * ay_op(v[1], bp)};
  };
  auto H_block = [&](const SuperVector& v) {
    return SuperVector{
        ax_op(v[0], [&](const SampledFunction& f) { return detail::hamiltonian(ax.V_minus, f); }),
        ay_op(v[1], [&](const SampledFunction& f) { return detail::hamiltonian(ay.V_minus, f); }),
        ax_op(v[2], [&](const SampledFunction& f) { return detail::hamiltonian(ax.V_plus, f); }),
        ay_op(v[3], [&](const SampledFunction& f) { return detail::hamiltonian(ay.V_plus, f); })};
  };

  std::mt19937 rng(seed);
  const double x0 = grid.q0.x_min(), x1 = grid.q0.x_max(), y0 = grid.q1.x_min(), y1 = grid.q1.x_max();
  std::uniform_real_distribution<double> cx(0.6 * x0, 0.6 * x1), cy(0.6 * y0, 0.6 * y1), amp(-1.0, 1.0);
  const double width = 0.12 * std::min(x1 - x0, y1 - y0);
  std::uniform_real_distribution<double> wd(0.8 * width, 1.5 * width);
  auto random_field = [&]() {
    double a[3], px[3], py[3], s[3];
    for (int k = 0; k < 3; ++k) {
      a[k] = amp(rng);
      px[k] = cx(rng);
      py[k] = cy(rng);
      s[k] = wd(rng);
    }
    return Field2D::sample(grid, [&](double x, double y) {
      double v = 0.0;
      for (int k = 0; k < 3; ++k) v += a[k] * std::exp(-((x - px[k]) * (x - px[k]) + (y - py[k]) * (y - py[k])) / (2 * s[k] * s[k]));
      return v;
    });
  };

  for (std::size_t t = 0; t < tests; ++t) {
    SuperVector v{random_field(), random_field(), random_field(), random_field()};
    auto qm = Q_minus(v), qp = Q_plus(v);
    auto qpqm = Q_plus(qm), qmqp = Q_minus(qp);
    SuperVector anti{0.5 * (qpqm[0] + qmqp[0]), 0.5 * (qpqm[1] + qmqp[1]), 0.5 * (qpqm[2] + qmqp[2]),
                     0.5 * (qpqm[3] + qmqp[3])};
    auto h = H_block(v);
    rep.anticommutator = std::max(rep.anticommutator, detail::super_max(detail::minus(anti, h)) / detail::super_max(h));
    auto mm = Q_minus(qm), pp = Q_plus(qp);
    rep.nilpotency = std::max({rep.nilpotency, 2.0 * detail::super_max(mm) / detail::super_max(v),
                               2.0 * detail::super_max(pp) / detail::super_max(v)});
    auto qmh = Q_minus(h), hqm = H_block(qm);
    auto qph = Q_plus(h), hqp = H_block(qp);
    rep.commutator = std::max({rep.commutator, detail::super_max(detail::minus(qmh, hqm)) / detail::super_max(qmh),
                               detail::super_max(detail::minus(qph, hqp)) / detail::super_max(qph)});
  }
  return rep;
}

}  // namespace susyqm::susy2d
