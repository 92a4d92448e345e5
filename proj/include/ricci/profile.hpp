#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "ricci/errors.hpp"
#include "ricci/stencil.hpp"

namespace ricci {

/// Rotationally symmetric metric on S^n at one instant,
///
///     g = phi(x)^2 dx^2 + psi(x)^2 g_{S^{n-1}},   x in [0, 1],
///
/// sampled on a fixed grid.  psi vanishes at both poles (x = 0, 1) and the
/// profile must close smoothly there: d psi / d s -> +1 at x = 0 and -1 at
/// x = 1, where s is arclength.
///
/// cell_s optionally carries the per-cell arclengths (the flow integrator
/// evolves these directly and keeps them authoritative); when absent they
/// are recovered from phi by the trapezoid rule.
struct WarpedProfile {
  int dim = 3;                 // n >= 3
  Grid grid;                   // nodes and palindromic cell widths
  std::vector<double> phi;     // radial profile, > 0 everywhere
  std::vector<double> psi;     // sphere-radius profile, > 0 in the interior
  std::vector<double> cell_s;  // optional per-cell arclengths
  double time = 0.0;           // flow time of this snapshot

  int nodes() const { return static_cast<int>(grid.x.size()); }
};

namespace detail {

/// Per-cell arclengths: authoritative values when present, otherwise the
/// trapezoid rule applied to phi.
inline std::vector<double> cells_of(const WarpedProfile& p) {
  const size_t nc = p.grid.dx.size();
  if (p.cell_s.size() == nc) return p.cell_s;
  std::vector<double> ell(nc);
  for (size_t i = 0; i < nc; ++i) {
    if (!(p.phi[i] > 0.0) || !(p.phi[i + 1] > 0.0))
      throw InvalidInput("profile: phi must be positive at every node");
    ell[i] = 0.5 * (p.phi[i] + p.phi[i + 1]) * p.grid.dx[i];
  }
  return ell;
}

/// Reconstruct the nodal radial profile from cell arclengths:
/// phi_i ~ (ell_{i-1} + ell_i) / (dx_{i-1} + dx_i) in the interior, with the
/// trapezoid relation inverted at the ends.  The right end mirrors the left
/// so palindromic data reconstructs palindromically.
inline std::vector<double> phi_from_cells(const Grid& g, std::span<const double> ell) {
  const int n = static_cast<int>(g.x.size());
  std::vector<double> phi(n);
  for (int i = 1; i + 1 < n; ++i)
    phi[i] = (ell[i - 1] + ell[i]) / (g.dx[i - 1] + g.dx[i]);
  phi[0] = 2.0 * ell[0] / g.dx[0] - phi[1];
  phi[n - 1] = 2.0 * ell[n - 2] / g.dx[n - 2] - phi[n - 2];
  return phi;
}

}  // namespace detail

/// Arclength s_i = integral of phi dx from 0 to x_i by the trapezoid rule
/// (the prefix sums of the cell arclengths).
inline std::vector<double> arclength(const WarpedProfile& p) {
  const auto ell = detail::cells_of(p);
  std::vector<double> s(p.nodes());
  s[0] = 0.0;
  for (size_t i = 0; i < ell.size(); ++i) {
    if (!(ell[i] > 0.0)) throw InvalidInput("arclength: cells must have positive length");
    s[i + 1] = s[i] + ell[i];
  }
  return s;
}

inline double total_arclength(const WarpedProfile& p) { return arclength(p).back(); }

/// Derivative table in the arclength variable: stencil weights built from
/// the cell arclengths, so d1/d2 of nodal fields are d/ds and d^2/ds^2.
inline DerivTable s_table(const WarpedProfile& p) { return DerivTable(detail::cells_of(p)); }

/// Pole slopes d psi / d s via one-sided stencils; smooth closure requires
/// values near +1 (left pole) and -1 (right pole).
inline std::pair<double, double> pole_slopes(const WarpedProfile& p, const DerivTable& st) {
  const int n = p.nodes();
  return {st.d1(p.psi, 0), st.d1(p.psi, n - 1)};
}

inline std::pair<double, double> pole_slopes(const WarpedProfile& p) {
  return pole_slopes(p, s_table(p));
}

struct ProfileCheck {
  bool ok = true;
  std::string failed_invariant;  // empty when ok
};

/// Validate the profile invariants.  slope_tol bounds the admissible pole
/// slope defect |dpsi/ds -+ 1|.
inline ProfileCheck check_profile(const WarpedProfile& p, double slope_tol = 5e-2) {
  ProfileCheck c;
  auto fail = [&](std::string why) {
    c.ok = false;
    c.failed_invariant = std::move(why);
    return c;
  };
  const int n = p.nodes();
  if (p.dim < 3) return fail("dimension must be >= 3");
  if (n < 5) return fail("grid must have at least 5 nodes");
  if (p.phi.size() != p.grid.x.size() || p.psi.size() != p.grid.x.size())
    return fail("phi/psi length must match grid");
  if (p.grid.dx.size() + 1 != p.grid.x.size()) return fail("dx length must be nodes-1");
  if (!p.cell_s.empty() && p.cell_s.size() != p.grid.dx.size())
    return fail("cell_s length must be nodes-1");
  if (p.grid.x.front() != 0.0 || p.grid.x.back() != 1.0)
    return fail("grid must span [0, 1]");
  for (int i = 0; i + 1 < n; ++i)
    if (!(p.grid.x[i] < p.grid.x[i + 1]) || !(p.grid.dx[i] > 0.0))
      return fail("grid must be strictly increasing");
  for (int i = 0; i < n; ++i) {
    if (!std::isfinite(p.phi[i]) || !std::isfinite(p.psi[i]))
      return fail("profile values must be finite");
    if (!(p.phi[i] > 0.0)) return fail("phi must be positive at every node");
  }
  for (double v : p.cell_s)
    if (!(v > 0.0) || !std::isfinite(v)) return fail("cell arclengths must be positive");
  if (p.psi.front() != 0.0 || p.psi.back() != 0.0)
    return fail("psi must vanish exactly at the poles");
  for (int i = 1; i + 1 < n; ++i)
    if (!(p.psi[i] > 0.0)) return fail("psi must be positive at interior nodes");
  const auto [sl, sr] = pole_slopes(p);
  if (std::abs(sl - 1.0) > slope_tol)
    return fail("pole regularity: dpsi/ds at x=0 must be +1 (got " + std::to_string(sl) + ")");
  if (std::abs(sr + 1.0) > slope_tol)
    return fail("pole regularity: dpsi/ds at x=1 must be -1 (got " + std::to_string(sr) + ")");
  return c;
}

inline void require_valid(const WarpedProfile& p, double slope_tol = 5e-2) {
  const auto c = check_profile(p, slope_tol);
  if (!c.ok) throw InvalidInput("invalid profile: " + c.failed_invariant);
}

namespace detail {

/// Even extrapolation in arclength offset from a pole: given values v1, v2 at
/// s-offsets d1 < d2, the limit at the pole of an even function is
/// (v1 d2^2 - v2 d1^2) / (d2^2 - d1^2).
inline double even_pole_limit(double v1, double d1, double v2, double d2) {
  const double a = d2 * d2;
  const double b = d1 * d1;
  return (v1 * a - v2 * b) / (a - b);
}

}  // namespace detail

}  // namespace ricci
