#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "ricci/errors.hpp"

namespace ricci {

/// Finite-difference weights at evaluation point z for the m-th derivative
/// over the given nodes (Fornberg's recurrence).
inline std::vector<double> fd_weights(double z, std::span<const double> xs, int m) {
  const int nd = static_cast<int>(xs.size());
  if (nd < m + 1) throw InvalidInput("fd_weights: too few nodes for derivative order");
  std::vector<double> c(static_cast<size_t>(nd) * (m + 1), 0.0);
  auto at = [&](int i, int k) -> double& { return c[static_cast<size_t>(i) * (m + 1) + k]; };
  double c1 = 1.0;
  double c4 = xs[0] - z;
  at(0, 0) = 1.0;
  for (int i = 1; i < nd; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = xs[i] - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = xs[i] - xs[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          at(i, k) = c1 * (k * at(i - 1, k - 1) - c5 * at(i - 1, k)) / c2;
        at(i, 0) = -c1 * c5 * at(i - 1, 0) / c2;
      }
      for (int k = mn; k >= 1; --k)
        at(j, k) = (c4 * at(j, k) - k * at(j, k - 1)) / c3;
      at(j, 0) = c4 * at(j, 0) / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(nd);
  for (int i = 0; i < nd; ++i) w[i] = at(i, m);
  return w;
}

/// Per-node derivative stencils for a fixed 1-D grid.
///
/// First derivatives use 5-point stencils (4th order on smooth grids); second
/// derivatives use 3-point interior stencils with 4-point one-sided closures.
/// Weights for the right half of the grid are mirror images of the left-half
/// weights so that mirror-symmetric data produces bitwise mirror-symmetric
/// derivatives.  The mirror construction requires the cell-width array to be
/// palindromic; grids built by make_uniform_grid / make_graded_grid satisfy
/// this by construction.
class DerivTable {
 public:
  struct Stencil {
    int start = 0;                   // first node of the stencil window
    int count = 0;                   // number of weights
    std::array<double, 5> w{};       // weights, applied low-index-first
    bool reversed = false;           // sum high-index-first (mirror order)
  };

  DerivTable() = default;

  /// Build from cell widths dx[0..N-1] (N+1 nodes).  With compact_d1 the
  /// first derivative uses 3-point stencils (2nd order); otherwise 5-point
  /// (4th order).  Time stepping uses the compact table: the wide one-sided
  /// closures near the poles feed grid-scale noise back through the stiff
  /// 1/psi terms and destabilize the flow there.
  explicit DerivTable(std::span<const double> dx, bool compact_d1 = false) {
    const int n_cells = static_cast<int>(dx.size());
    if (n_cells < 4) throw InvalidInput("DerivTable: need at least 5 nodes");
    const int n = n_cells + 1;
    d1_.resize(n);
    d2_.resize(n);

    // Left half (and middle node) from Fornberg on local offsets.
    const int half = n / 2;
    for (int i = 0; i <= half; ++i) {
      d1_[i] = build(dx, i, n, compact_d1 ? 3 : 5, 1);
      if (i == 0 || i == n - 1) {
        d2_[i] = build(dx, i, n, 4, 2);
      } else {
        d2_[i] = build(dx, i, n, 3, 2);
      }
    }
    // Right half mirrored: odd derivative weights negate, even keep sign.
    for (int i = half + 1; i < n; ++i) {
      const int im = n - 1 - i;
      d1_[i] = mirror(d1_[im], n, true);
      d2_[i] = mirror(d2_[im], n, false);
    }
  }

  double d1(std::span<const double> f, int i) const { return apply(d1_[i], f); }
  double d2(std::span<const double> f, int i) const { return apply(d2_[i], f); }
  int size() const { return static_cast<int>(d1_.size()); }

 private:
  static Stencil build(std::span<const double> dx, int i, int n, int width, int order) {
    int start = i - width / 2;
    if (order == 2 && width == 4) start = (i == 0) ? 0 : n - width;  // one-sided
    start = std::max(0, std::min(start, n - width));
    // Local node offsets relative to node i, accumulated from cell widths so
    // mirrored windows see exactly negated-reversed offsets.
    std::array<double, 5> pos{};
    pos[i - start] = 0.0;
    for (int j = i - start + 1; j < width; ++j) pos[j] = pos[j - 1] + dx[start + j - 1];
    for (int j = i - start - 1; j >= 0; --j) pos[j] = pos[j + 1] - dx[start + j];
    auto w = fd_weights(0.0, std::span<const double>(pos.data(), width), order);
    Stencil s;
    s.start = start;
    s.count = width;
    for (int j = 0; j < width; ++j) s.w[j] = w[j];
    return s;
  }

  static Stencil mirror(const Stencil& src, int n, bool negate) {
    Stencil s;
    s.count = src.count;
    s.start = n - src.start - src.count;
    for (int j = 0; j < src.count; ++j) {
      const double v = src.w[src.count - 1 - j];
      s.w[j] = negate ? -v : v;
    }
    s.reversed = !src.reversed;
    return s;
  }

  static double apply(const Stencil& s, std::span<const double> f) {
    double acc = 0.0;
    if (!s.reversed) {
      for (int j = 0; j < s.count; ++j) acc += s.w[j] * f[s.start + j];
    } else {
      for (int j = s.count - 1; j >= 0; --j) acc += s.w[j] * f[s.start + j];
    }
    return acc;
  }

  std::vector<Stencil> d1_, d2_;
};

/// Node coordinates plus the authoritative palindromic cell-width array.
struct Grid {
  std::vector<double> x;   // nodes, x.front() == 0, x.back() == 1
  std::vector<double> dx;  // cell widths, palindromic by construction
};

inline Grid make_uniform_grid(int n_cells) {
  if (n_cells < 4) throw InvalidInput("make_uniform_grid: need >= 4 cells");
  Grid g;
  g.dx.assign(n_cells, 1.0 / n_cells);
  g.x.resize(n_cells + 1);
  g.x[0] = 0.0;
  for (int i = 1; i <= n_cells; ++i) g.x[i] = g.x[i - 1] + g.dx[i - 1];
  g.x[n_cells] = 1.0;
  return g;
}

/// Grid with cells refined around `center` by factor `strength` within
/// Gaussian width `width`.  Cell widths are forced palindromic when the
/// density profile is symmetric about 1/2.
inline Grid make_graded_grid(int n_cells, double center, double width, double strength) {
  if (n_cells < 4) throw InvalidInput("make_graded_grid: need >= 4 cells");
  if (width <= 0.0 || strength < 0.0) throw InvalidInput("make_graded_grid: bad parameters");
  std::vector<double> w(n_cells);
  for (int i = 0; i < n_cells; ++i) {
    const double xm = (i + 0.5) / n_cells;
    const double u = (xm - center) / width;
    w[i] = 1.0 / (1.0 + strength * std::exp(-0.5 * u * u));
  }
  if (std::abs(center - 0.5) < 1e-14) {
    for (int i = 0; i < n_cells / 2; ++i) w[n_cells - 1 - i] = w[i];
  }
  double total = 0.0;
  for (double v : w) total += v;
  Grid g;
  g.dx.resize(n_cells);
  for (int i = 0; i < n_cells; ++i) g.dx[i] = w[i] / total;
  if (std::abs(center - 0.5) < 1e-14) {
    for (int i = 0; i < n_cells / 2; ++i) g.dx[n_cells - 1 - i] = g.dx[i];
  }
  g.x.resize(n_cells + 1);
  g.x[0] = 0.0;
  for (int i = 1; i <= n_cells; ++i) g.x[i] = g.x[i - 1] + g.dx[i - 1];
  g.x[n_cells] = 1.0;
  return g;
}

}  // namespace ricci
