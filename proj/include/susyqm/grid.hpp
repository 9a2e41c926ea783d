#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "susyqm/error.hpp"

namespace susyqm {

/// Kinetic-term convention of a Schrödinger operator -κ d²/dx² + V.
/// `half` is ½p² (κ=½), `unit` is p² with ħ²/2μ = 1 (κ=1).
enum class Kinetic { half, unit };

constexpr double kappa(Kinetic k) noexcept { return k == Kinetic::half ? 0.5 : 1.0; }

inline const char* to_string(Kinetic k) noexcept { return k == Kinetic::half ? "half" : "unit"; }

/// Uniform 1D grid of n nodes spanning [x_min, x_max] inclusive.
class Grid1D {
 public:
  static constexpr std::size_t min_nodes = 16;

  Grid1D(double x_min, double x_max, std::size_t n) : x_min_(x_min), x_max_(x_max), n_(n) {
    if (n < min_nodes) throw invalid_input("Grid1D: need at least 16 nodes, got " + std::to_string(n));
    if (!(x_max > x_min) || !std::isfinite(x_min) || !std::isfinite(x_max))
      throw invalid_input("Grid1D: x_max must exceed x_min and both be finite");
  }

  /// Default box for bound-state work.
  static Grid1D standard() { return {-12.0, 12.0, 3001}; }

  double x_min() const noexcept { return x_min_; }
  double x_max() const noexcept { return x_max_; }
  std::size_t size() const noexcept { return n_; }
  double h() const noexcept { return (x_max_ - x_min_) / static_cast<double>(n_ - 1); }
  double x(std::size_t i) const noexcept {
    return i + 1 == n_ ? x_max_ : x_min_ + static_cast<double>(i) * h();
  }

  std::vector<double> nodes() const {
    std::vector<double> xs(n_);
    for (std::size_t i = 0; i < n_; ++i) xs[i] = x(i);
    return xs;
  }

  /// Index of the node closest to `x` (clamped to the grid).
  std::size_t nearest(double x) const noexcept {
    if (x <= x_min_) return 0;
    if (x >= x_max_) return n_ - 1;
    auto i = static_cast<std::size_t>(std::lround((x - x_min_) / h()));
    return i < n_ ? i : n_ - 1;
  }

  /// Sub-grid made of nodes [first, last] taken every `stride` nodes.
  Grid1D subgrid(std::size_t first, std::size_t last, std::size_t stride = 1) const {
    if (last >= n_ || first >= last || stride == 0 || (last - first) % stride != 0)
      throw invalid_input("Grid1D::subgrid: bad node range");
    return {x(first), x(last), (last - first) / stride + 1};
  }

  friend bool operator==(const Grid1D& a, const Grid1D& b) noexcept {
    return a.n_ == b.n_ && a.x_min_ == b.x_min_ && a.x_max_ == b.x_max_;
  }

 private:
  double x_min_;
  double x_max_;
  std::size_t n_;
};

/// Real function tabulated on the nodes of a Grid1D. Values are finite.
class SampledFunction {
 public:
  SampledFunction(Grid1D grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size())
      throw invalid_input("SampledFunction: value count does not match grid size");
    for (std::size_t i = 0; i < values_.size(); ++i)
      if (!std::isfinite(values_[i]))
        throw invalid_input("SampledFunction: non-finite value at x=" + std::to_string(grid_.x(i)));
  }

  /// Zero function on `grid`.
  explicit SampledFunction(Grid1D grid) : grid_(grid), values_(grid.size(), 0.0) {}

  template <class F>
  static SampledFunction sample(const Grid1D& grid, F&& f) {
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(grid.x(i));
    return {grid, std::move(v)};
  }

  const Grid1D& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  double x(std::size_t i) const noexcept { return grid_.x(i); }

  double max_abs() const noexcept {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
  }

  /// Pointwise transform f(x, value) -> new value.
  template <class F>
  SampledFunction map(F&& f) const {
    std::vector<double> v(values_.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(grid_.x(i), values_[i]);
    return {grid_, std::move(v)};
  }

  /// Restriction to nodes [first, last].
  SampledFunction slice(std::size_t first, std::size_t last) const {
    auto g = grid_.subgrid(first, last);
    return {g, std::vector<double>(values_.begin() + static_cast<std::ptrdiff_t>(first),
                                   values_.begin() + static_cast<std::ptrdiff_t>(last) + 1)};
  }

 private:
  Grid1D grid_;
  std::vector<double> values_;
};

inline void require_same_grid(const SampledFunction& a, const SampledFunction& b, const char* where) {
  if (!(a.grid() == b.grid())) throw invalid_input(std::string(where) + ": functions live on different grids");
}

/// Nodewise a ∘ b for two functions on the same grid.
template <class Op>
SampledFunction combine(const SampledFunction& a, const SampledFunction& b, Op op) {
  require_same_grid(a, b, "combine");
  std::vector<double> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = op(a[i], b[i]);
  return {a.grid(), std::move(v)};
}

inline SampledFunction operator+(const SampledFunction& a, const SampledFunction& b) {
  return combine(a, b, std::plus<>{});
}
inline SampledFunction operator-(const SampledFunction& a, const SampledFunction& b) {
  return combine(a, b, std::minus<>{});
}
inline SampledFunction operator*(const SampledFunction& a, const SampledFunction& b) {
  return combine(a, b, std::multiplies<>{});
}
inline SampledFunction operator*(double s, const SampledFunction& a) {
  return a.map([s](double, double v) { return s * v; });
}

/// max_i |a_i - b_i| over nodes [skip, n-skip).
inline double sup_distance(const SampledFunction& a, const SampledFunction& b, std::size_t skip = 0) {
  require_same_grid(a, b, "sup_distance");
  double m = 0.0;
  for (std::size_t i = skip; i + skip < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace susyqm
