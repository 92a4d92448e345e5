#pragma once

#include <cmath>
#include <vector>

#include "ricci/profile.hpp"

namespace ricci {

/// Pointwise curvature data of a warped profile.
///
/// Norm convention (orthonormal frame, plain component sums):
///   |Ric|^2 = sum_ij Ric_ij^2 = ric_rad^2 + (n-1) ric_sph^2,
///   |Rm|^2  = sum_ijkl Rm_ijkl^2 = 4(n-1) k_rad^2 + 2(n-1)(n-2) k_sph^2.
/// On the round S^n of radius r these give |Rm| = sqrt(2n(n-1))/r^2 and
/// |Ric| = sqrt(n)(n-1)/r^2.  All reported functionals use this convention.
struct CurvatureField {
  std::vector<double> k_rad;          // sectional curvature, radial planes
  std::vector<double> k_sph;          // sectional curvature, spherical planes
  std::vector<double> ric_rad;        // Ricci eigenvalue, radial direction
  std::vector<double> ric_sph;        // Ricci eigenvalue, spherical directions
  std::vector<double> scalar;         // scalar curvature R
  std::vector<double> norm_ric;       // |Ric|
  std::vector<double> norm_rm;        // |Rm|
  std::vector<double> norm_ric_minus; // norm of the negative part of Ric

  int nodes() const { return static_cast<int>(k_rad.size()); }
};

/// Curvature of the warped metric:
///   k_rad = -psi_ss / psi,          k_sph = (1 - psi_s^2) / psi^2,
///   ric_rad = (n-1) k_rad,          ric_sph = k_rad + (n-2) k_sph,
///   R = (n-1)(2 k_rad + (n-2) k_sph).
/// Derivatives are taken on the arclength grid.  At the poles both sectional
/// curvatures share the smooth limit of k_rad, recovered by even
/// extrapolation in arclength from the first interior nodes.
inline CurvatureField curvature(const WarpedProfile& p, const DerivTable& st) {
  const int n = p.nodes();
  const int m = p.dim;

  CurvatureField f;
  f.k_rad.resize(n);
  f.k_sph.resize(n);

  for (int i = 1; i + 1 < n; ++i) {
    if (!(p.psi[i] > 0.0))
      throw NumericalBreakdown("curvature: psi must be positive at interior nodes", i);
    const double fs = st.d1(p.psi, i);
    const double fss = st.d2(p.psi, i);
    f.k_rad[i] = -fss / p.psi[i];
    f.k_sph[i] = (1.0 - fs * fs) / (p.psi[i] * p.psi[i]);
  }

  // Both sectional curvatures are smooth even functions of the arclength
  // offset from a pole, but their raw ratios there divide discretization
  // noise by psi -> 0 (the k_sph value at the first node amplifies slope
  // noise by 1/psi^2).  Near each pole they are replaced by even quadratic
  // fits over a ring of well-conditioned nodes, blended smoothly back to the
  // local values; smoothness forces k_sph = k_rad at the poles themselves.
  const auto s = arclength(p);
  const double smax = s.back();
  constexpr int kInner = 3;   // fully fitted
  constexpr int kOuter = 9;   // blended out by here
  constexpr int kRingLo = 5;
  constexpr int kRingHi = 10;
  if (n > 2 * (kRingHi + 3)) {
    auto smoother = [](double u) { return u * u * u * (10.0 + u * (-15.0 + 6.0 * u)); };
    auto fit_pole = [&](std::vector<double>& field, int pole, int dir) {
      auto off = [&](int k) { return (dir > 0) ? s[k] : smax - s[n - 1 - k]; };
      const double sref = off(kRingHi);
      double a00 = 0, a01 = 0, a11 = 0, b0 = 0, b1 = 0;
      for (int k = kRingLo; k <= kRingHi; ++k) {
        const double u = (off(k) / sref) * (off(k) / sref);
        const double v = field[pole + dir * k];
        a00 += 1.0;
        a01 += u;
        a11 += u * u;
        b0 += v;
        b1 += u * v;
      }
      const double det = a00 * a11 - a01 * a01;
      if (det == 0.0) return;
      const double c0 = (b0 * a11 - b1 * a01) / det;
      const double c1 = (a00 * b1 - a01 * b0) / det;
      for (int k = 0; k <= kOuter; ++k) {
        const double u = (off(k) / sref) * (off(k) / sref);
        const double fit = c0 + c1 * u;
        double w = 1.0;
        if (k > kInner)
          w = smoother(static_cast<double>(kOuter - k) / (kOuter - kInner));
        field[pole + dir * k] = w * fit + (1.0 - w) * field[pole + dir * k];
      }
    };
    fit_pole(f.k_rad, 0, +1);
    fit_pole(f.k_rad, n - 1, -1);
    fit_pole(f.k_sph, 0, +1);
    fit_pole(f.k_sph, n - 1, -1);
  } else {
    f.k_rad[0] = detail::even_pole_limit(f.k_rad[1], s[1], f.k_rad[2], s[2]);
    f.k_rad[n - 1] = detail::even_pole_limit(f.k_rad[n - 2], smax - s[n - 2],
                                             f.k_rad[n - 3], smax - s[n - 3]);
  }
  f.k_sph[0] = f.k_rad[0];
  f.k_sph[n - 1] = f.k_rad[n - 1];

  f.ric_rad.resize(n);
  f.ric_sph.resize(n);
  f.scalar.resize(n);
  f.norm_ric.resize(n);
  f.norm_rm.resize(n);
  f.norm_ric_minus.resize(n);
  const double c_rm_rad = 4.0 * (m - 1);
  const double c_rm_sph = 2.0 * (m - 1) * (m - 2);
  for (int i = 0; i < n; ++i) {
    const double kr = f.k_rad[i];
    const double ks = f.k_sph[i];
    const double rr = (m - 1) * kr;
    const double rs = kr + (m - 2) * ks;
    f.ric_rad[i] = rr;
    f.ric_sph[i] = rs;
    f.scalar[i] = rr + (m - 1) * rs;
    f.norm_ric[i] = std::sqrt(rr * rr + (m - 1) * rs * rs);
    f.norm_rm[i] = std::sqrt(c_rm_rad * kr * kr + c_rm_sph * ks * ks);
    const double rrm = std::min(rr, 0.0);
    const double rsm = std::min(rs, 0.0);
    f.norm_ric_minus[i] = std::sqrt(rrm * rrm + (m - 1) * rsm * rsm);
    if (!std::isfinite(f.scalar[i]) || !std::isfinite(f.norm_rm[i]))
      throw NumericalBreakdown("curvature: non-finite value", i);
  }
  return f;
}

inline CurvatureField curvature(const WarpedProfile& p) { return curvature(p, s_table(p)); }

/// |Rm|, |Ric|, R of the round S^n with radius r under the fixed convention.
struct RoundSphereCurvature {
  double scalar, norm_ric, norm_rm;
};
inline RoundSphereCurvature round_sphere_curvature(int n, double r) {
  const double r2 = r * r;
  return {n * (n - 1.0) / r2, std::sqrt(static_cast<double>(n)) * (n - 1.0) / r2,
          std::sqrt(2.0 * n * (n - 1.0)) / r2};
}

/// Same for the product cylinder S^{n-1} x R with sphere radius r.
inline RoundSphereCurvature cylinder_curvature(int n, double r) {
  const double r2 = r * r;
  return {(n - 1.0) * (n - 2.0) / r2,
          std::sqrt(n - 1.0) * (n - 2.0) / r2,
          std::sqrt(2.0 * (n - 1.0) * (n - 2.0)) / r2};
}

}  // namespace ricci
