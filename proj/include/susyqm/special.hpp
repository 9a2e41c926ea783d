#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include "susyqm/error.hpp"

namespace susyqm::special {

namespace detail {
// Lanczos approximation, g = 7, nine coefficients.
inline constexpr double lanczos_g = 7.0;
inline constexpr std::array<double, 9> lanczos_coef = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
}  // namespace detail

/// Γ(z) for complex z (reflection formula for Re z < ½).
inline std::complex<double> gamma(std::complex<double> z) {
  using std::numbers::pi;
  if (z.real() < 0.5) return pi / (std::sin(pi * z) * gamma(1.0 - z));
  z -= 1.0;
  std::complex<double> a = detail::lanczos_coef[0];
  for (std::size_t i = 1; i < detail::lanczos_coef.size(); ++i)
    a += detail::lanczos_coef[i] / (z + static_cast<double>(i));
  std::complex<double> t = z + detail::lanczos_g + 0.5;
  return std::sqrt(2.0 * pi) * std::pow(t, z + 0.5) * std::exp(-t) * a;
}

/// Γ(x) for real x.
inline double gamma(double x) {
  using std::numbers::pi;
  if (x < 0.5) return pi / (std::sin(pi * x) * gamma(1.0 - x));
  x -= 1.0;
  double a = detail::lanczos_coef[0];
  for (std::size_t i = 1; i < detail::lanczos_coef.size(); ++i) a += detail::lanczos_coef[i] / (x + static_cast<double>(i));
  double t = x + detail::lanczos_g + 0.5;
  return std::sqrt(2.0 * pi) * std::pow(t, x + 0.5) * std::exp(-t) * a;
}

namespace detail {

inline constexpr std::array<double, 8> kronrod_x = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kronrod_w = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> gauss_w = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
void gk15(F& f, double a, double b, double& result, double& error) {
  const double c = 0.5 * (a + b);
  const double r = 0.5 * (b - a);
  double fc = f(c);
  double k = fc * kronrod_w[7];
  double g = fc * gauss_w[3];
  for (int j = 0; j < 7; ++j) {
    double dx = r * kronrod_x[static_cast<std::size_t>(j)];
    double s = f(c - dx) + f(c + dx);
    k += kronrod_w[static_cast<std::size_t>(j)] * s;
    if (j % 2 == 1) g += gauss_w[static_cast<std::size_t>(j / 2)] * s;
  }
  result = k * r;
  error = std::abs((k - g) * r);
}

template <class F>
double adapt(F& f, double a, double b, double whole, double err, double abs_tol, int depth) {
  if (err <= abs_tol || depth > 40) return whole;
  const double m = 0.5 * (a + b);
  double l, el, rr, er;
  gk15(f, a, m, l, el);
  gk15(f, m, b, rr, er);
  if (el + er <= abs_tol) return l + rr;
  return adapt(f, a, m, l, el, 0.5 * abs_tol, depth + 1) + adapt(f, m, b, rr, er, 0.5 * abs_tol, depth + 1);
}

}  // namespace detail

/// Adaptive Gauss–Kronrod (7/15) quadrature of f over [a, b] to an
/// absolute tolerance.
template <class F>
double integrate_adaptive(F&& f, double a, double b, double abs_tol) {
  double whole, err;
  detail::gk15(f, a, b, whole, err);
  return detail::adapt(f, a, b, whole, err, abs_tol, 0);
}

/// K_{iν}(x) = ∫₀^∞ exp(-x cosh t) cos(ν t) dt, truncated where the
/// integrand envelope drops below 1e-16. Real for real ν; requires x > 0.
inline double bessel_k_imag(double nu, double x) {
  if (!(x > 0.0)) throw invalid_input("bessel_k_imag: argument must be positive");
  const double t_max = std::acosh(std::max(1.0, 36.9 / x)) + 1e-3;
  auto f = [nu, x](double t) { return std::exp(-x * std::cosh(t)) * std::cos(nu * t); };
  // Panels of unit width keep the oscillatory part well resolved.
  const double scale = std::exp(-x);
  double sum = 0.0;
  double a = 0.0;
  while (a < t_max) {
    double b = std::min(t_max, a + 1.0);
    sum += integrate_adaptive(f, a, b, 1e-15 * std::max(scale, 1e-300));
    a = b;
  }
  return sum;
}

/// I_μ(z) for complex order μ and real z > 0, by the ascending series.
inline std::complex<double> bessel_i(std::complex<double> mu, double z) {
  if (!(z > 0.0)) throw invalid_input("bessel_i: argument must be positive");
  const double q = 0.25 * z * z;
  std::complex<double> term = std::exp(mu * std::log(0.5 * z)) / gamma(mu + 1.0);
  std::complex<double> sum = term;
  for (int k = 1; k < 500; ++k) {
    term *= q / (static_cast<double>(k) * (static_cast<double>(k) + mu));
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

/// Real companion of K_{iν}: L_{iν}(z) = π/(2 sinh νπ) (I_{iν}(z) + I_{-iν}(z))
/// with the imaginary unit of the prefactor dropped; equals
/// π/sinh(νπ) Re I_{iν}(z). Requires ν ≠ 0.
inline double bessel_l_imag(double nu, double z) {
  using std::numbers::pi;
  if (nu == 0.0) throw invalid_input("bessel_l_imag: order must be nonzero (sinh pole)");
  return pi / std::sinh(nu * pi) * bessel_i({0.0, nu}, z).real();
}

}  // namespace susyqm::special
