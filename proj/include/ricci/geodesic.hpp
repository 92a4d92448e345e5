#pragma once

// Geodesics on the meridian surface of revolution ds^2 + psi(s)^2 dgamma^2.
// By reflection symmetry that surface is totally geodesic in the warped
// S^n, so pairwise distances between points given by (x, angle) reduce to
// 2-D geodesic shooting: integrate
//   s' = cos(theta),  gamma' = sin(theta)/psi,  theta' = -(psi_s/psi) sin(theta)
// (the Clairaut constant psi sin(theta) is conserved) and bisect on the
// launch angle.  Polar caps are crossed with flat-disk chords, and geodesic
// ball volumes come from the polar-fan quadrature with scalar Jacobi fields:
//   vol = omega_{n-2} int_0^pi int_0^rho j(u) (psi sin(gamma))^{n-2} du dtheta0,
//   j'' = -k_rad(s(u)) j,  j(0) = 0,  j'(0) = 1.

#include <algorithm>
#include <cmath>
#include <optional>
#include <queue>
#include <vector>

#include "ricci/curvature.hpp"
#include "ricci/profile.hpp"

namespace ricci {

struct MeridianPoint {
  double x = 0.0;      // grid coordinate in [0, 1]
  double angle = 0.0;  // meridian-sphere angle
};

struct DistanceResult {
  double length = 0.0;
  bool fallback = false;  // graph shortest path was used
};

struct BallVolume {
  double volume = 0.0;
  bool saturated = false;  // radius reached the whole space
};

struct GeodesicOptions {
  int fan_rays = 121;            // initial launch-angle fan
  double step_frac = 1.0 / 3000; // tracer step as a fraction of total arclength
  int refine_iters = 48;         // bisection depth on the launch angle
  int volume_rays = 181;         // polar fan for ball volumes
  int cap_substeps = 8;          // sampling of flat cap chords
};

namespace geo {

/// Interpolation context for one profile: psi(s) as a C^1 cubic Hermite,
/// plus the radial sectional curvature for Jacobi transport.
struct Context {
  int dim = 3;
  double smax = 0.0;
  double cap_s = 0.0;  // flat-chord radius around each pole
  std::vector<double> s, psi, dpsi, krad, x;

  int locate(double sv) const {
    int lo = 0, hi = static_cast<int>(s.size()) - 1;
    while (hi - lo > 1) {
      const int mid = (lo + hi) / 2;
      if (s[mid] <= sv) lo = mid; else hi = mid;
    }
    return lo;
  }
  double psi_at(double sv) const {
    const int i = locate(std::clamp(sv, 0.0, smax));
    const double h = s[i + 1] - s[i];
    const double t = (std::clamp(sv, 0.0, smax) - s[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * psi[i] + (t3 - 2 * t2 + t) * h * dpsi[i] +
           (-2 * t3 + 3 * t2) * psi[i + 1] + (t3 - t2) * h * dpsi[i + 1];
  }
  double dpsi_at(double sv) const {
    const int i = locate(std::clamp(sv, 0.0, smax));
    const double h = s[i + 1] - s[i];
    const double t = (std::clamp(sv, 0.0, smax) - s[i]) / h;
    const double t2 = t * t;
    return ((6 * t2 - 6 * t) * psi[i] + (3 * t2 - 4 * t + 1) * h * dpsi[i] +
            (-6 * t2 + 6 * t) * psi[i + 1] + (3 * t2 - 2 * t) * h * dpsi[i + 1]) / h;
  }
  double krad_at(double sv) const {
    const int i = locate(std::clamp(sv, 0.0, smax));
    const double t = (std::clamp(sv, 0.0, smax) - s[i]) / (s[i + 1] - s[i]);
    return (1.0 - t) * krad[i] + t * krad[i + 1];
  }
  double s_of_x(double xv) const {
    int lo = 0, hi = static_cast<int>(x.size()) - 1;
    xv = std::clamp(xv, 0.0, 1.0);
    while (hi - lo > 1) {
      const int mid = (lo + hi) / 2;
      if (x[mid] <= xv) lo = mid; else hi = mid;
    }
    return s[lo] + (s[lo + 1] - s[lo]) * (xv - x[lo]) / (x[lo + 1] - x[lo]);
  }
  double x_of_s(double sv) const {
    const int i = locate(std::clamp(sv, 0.0, smax));
    return x[i] + (x[i + 1] - x[i]) * (std::clamp(sv, 0.0, smax) - s[i]) / (s[i + 1] - s[i]);
  }
};

inline Context make_context(const WarpedProfile& p) {
  Context c;
  c.dim = p.dim;
  c.s = arclength(p);
  c.smax = c.s.back();
  c.x = p.grid.x;
  c.psi = p.psi;
  c.dpsi.resize(p.nodes());
  DerivTable st = s_table(p);
  for (int i = 0; i < p.nodes(); ++i) c.dpsi[i] = st.d1(p.psi, i);
  auto curv = curvature(p, st);
  c.krad = curv.k_rad;
  c.cap_s = std::max(c.s[2], c.smax - c.s[p.nodes() - 3]);
  c.cap_s = std::max(c.cap_s, 1e-3 * c.smax);
  return c;
}

/// Ray state and dense output sample.
struct RaySample {
  double u, s, gamma;
};

/// Jacobi carry for volume quadrature.
struct Jacobi {
  double j = 0.0, jp = 1.0;
  void advance_const_k(double k, double du) {
    double nj, njp;
    if (k > 1e-12) {
      const double w = std::sqrt(k);
      nj = j * std::cos(w * du) + jp * std::sin(w * du) / w;
      njp = -j * w * std::sin(w * du) + jp * std::cos(w * du);
    } else if (k < -1e-12) {
      const double w = std::sqrt(-k);
      nj = j * std::cosh(w * du) + jp * std::sinh(w * du) / w;
      njp = j * w * std::sinh(w * du) + jp * std::cosh(w * du);
    } else {
      nj = j + jp * du;
      njp = jp;
    }
    j = nj;
    jp = njp;
  }
};

/// Integrate one geodesic from (s0, gamma = 0) with launch angle theta0
/// measured from the +s meridian direction.  Samples are appended to `out`
/// until the total length exceeds u_max (or the volume accumulation hits a
/// conjugate point when `volume` is requested).
struct TraceResult {
  std::vector<RaySample> samples;
  double volume = 0.0;      // accumulated j (psi sin g)^{n-2} du, if requested
  bool conjugate = false;   // j crossed zero
};

inline TraceResult trace_ray(const Context& c, double s0, double theta0, double u_max,
                             const GeodesicOptions& opt, bool want_volume,
                             double volume_cut = 0.0) {
  TraceResult res;
  const double h = std::max(1e-12, c.smax * opt.step_frac);
  double s = s0, g = 0.0, th = theta0, u = 0.0;
  Jacobi jac;
  double prev_f = 0.0;  // volume integrand at the previous sample
  const int nm2 = c.dim - 2;
  auto integrand = [&](double sv, double gv, double jv) {
    const double fiber = c.psi_at(sv) * std::sin(std::min(gv, M_PI));
    return jv * std::pow(std::max(fiber, 0.0), nm2);
  };
  res.samples.push_back({0.0, s, 0.0});

  auto cap_cross = [&](bool left_pole) -> bool {
    // flat chord across the polar cap of radius cap_s
    const double sigma0 = left_pole ? s : (c.smax - s);
    const double inward = left_pole ? -std::cos(th) : std::cos(th);
    if (inward <= 0.0) return true;  // moving outward, nothing to do
    const double trans = std::sin(th);
    // local Cartesian entry point and unit direction
    double ex = sigma0, ey = 0.0;
    double dxv = -inward, dyv = trans;
    const double b = std::abs(ex * dyv - ey * dxv);
    const double chord = 2.0 * std::sqrt(std::max(sigma0 * sigma0 - b * b, 0.0));
    const double kcap = left_pole ? c.krad.front() : c.krad.back();
    const int msub = std::max(2, opt.cap_substeps);
    double px = ex, py = ey;
    double gprev = 0.0;
    for (int q = 1; q <= msub; ++q) {
      const double du = chord / msub;
      px = ex + dxv * chord * q / msub;
      py = ey + dyv * chord * q / msub;
      const double sigma = std::hypot(px, py);
      const double dg = std::atan2(py, px) - 0.0;  // angle swept from entry azimuth
      const double snew = left_pole ? sigma : (c.smax - sigma);
      if (want_volume) {
        jac.advance_const_k(kcap, du);
        if (jac.j <= 0.0) {
          res.conjugate = true;
          return false;
        }
        const double gv = g + std::abs(dg);
        const double f = integrand(snew, gv, jac.j);
        res.volume += 0.5 * (prev_f + f) * du;
        prev_f = f;
        if (volume_cut > 0.0 && u + du * q > volume_cut - 1e-12) return false;
      }
      gprev = dg;
    }
    (void)gprev;
    const double dgamma = M_PI - 2.0 * std::asin(std::clamp(b / sigma0, 0.0, 1.0));
    u += chord;
    g += dgamma;
    s = left_pole ? std::hypot(px, py) : (c.smax - std::hypot(px, py));
    th = M_PI - th;
    res.samples.push_back({u, s, g});
    return u < u_max;
  };

  if (want_volume) prev_f = 0.0;

  int guard = static_cast<int>(u_max / h) + 64;
  while (u < u_max && guard-- > 0) {
    if (s < c.cap_s && std::cos(th) < 0.0) {
      if (!cap_cross(true)) break;
      continue;
    }
    if (s > c.smax - c.cap_s && std::cos(th) > 0.0) {
      if (!cap_cross(false)) break;
      continue;
    }
    // RK4 on (s, gamma, theta)
    auto deriv = [&](double sv, double thv, double* ds, double* dg, double* dth) {
      const double pv = std::max(c.psi_at(sv), 1e-300);
      *ds = std::cos(thv);
      *dg = std::sin(thv) / pv;
      *dth = -c.dpsi_at(sv) / pv * std::sin(thv);
    };
    double k1s, k1g, k1t, k2s, k2g, k2t, k3s, k3g, k3t, k4s, k4g, k4t;
    deriv(s, th, &k1s, &k1g, &k1t);
    deriv(s + 0.5 * h * k1s, th + 0.5 * h * k1t, &k2s, &k2g, &k2t);
    deriv(s + 0.5 * h * k2s, th + 0.5 * h * k2t, &k3s, &k3g, &k3t);
    deriv(s + h * k3s, th + h * k3t, &k4s, &k4g, &k4t);
    const double ns = s + h / 6.0 * (k1s + 2 * (k2s + k3s) + k4s);
    const double ng = g + h / 6.0 * (k1g + 2 * (k2g + k3g) + k4g);
    const double nth = th + h / 6.0 * (k1t + 2 * (k2t + k3t) + k4t);
    if (want_volume) {
      jac.advance_const_k(c.krad_at(s), h);
      if (jac.j <= 0.0) {
        res.conjugate = true;
        break;
      }
      const double f = integrand(ns, ng, jac.j);
      res.volume += 0.5 * (prev_f + f) * h;
      prev_f = f;
      if (volume_cut > 0.0 && u + h > volume_cut - 1e-12) break;
    }
    s = std::clamp(ns, 0.0, c.smax);
    g = ng;
    th = nth;
    u += h;
    res.samples.push_back({u, s, g});
  }
  return res;
}

/// First crossing of gamma == target along a ray (gamma is monotone since
/// the Clairaut constant has a fixed sign): returns (u, s) interpolated.
inline std::optional<std::pair<double, double>> gamma_crossing(
    const std::vector<RaySample>& samples, double target) {
  for (size_t i = 1; i < samples.size(); ++i) {
    if (samples[i].gamma >= target) {
      const auto& a = samples[i - 1];
      const auto& b = samples[i];
      const double t = (target - a.gamma) / std::max(b.gamma - a.gamma, 1e-300);
      return std::make_pair(a.u + t * (b.u - a.u), a.s + t * (b.s - a.s));
    }
  }
  return std::nullopt;
}

/// Graph-shortest-path fallback on an (x, angle) mesh: first-order accurate,
/// used only when launch-angle bracketing fails.
inline double dijkstra_distance(const Context& c, double s_a, double s_b, double dgamma) {
  const int ns = 160, ng = 96;
  const double gmax = M_PI;
  auto idx = [&](int i, int j) { return i * ng + j; };
  auto s_of = [&](int i) { return c.smax * i / (ns - 1); };
  auto g_of = [&](int j) { return gmax * j / (ng - 1); };
  std::vector<double> dist(static_cast<size_t>(ns) * ng,
                           std::numeric_limits<double>::infinity());
  using QE = std::pair<double, int>;
  std::priority_queue<QE, std::vector<QE>, std::greater<>> pq;
  const int ia = std::clamp(static_cast<int>(std::round(s_a / c.smax * (ns - 1))), 0, ns - 1);
  dist[idx(ia, 0)] = 0.0;
  pq.push({0.0, idx(ia, 0)});
  auto edge = [&](int i1, int j1, int i2, int j2) {
    const double sm = 0.5 * (s_of(i1) + s_of(i2));
    const double ds = s_of(i2) - s_of(i1);
    const double dg = g_of(j2) - g_of(j1);
    const double pv = std::max(c.psi_at(sm), 1e-9 * c.smax);
    return std::hypot(ds, pv * dg);
  };
  while (!pq.empty()) {
    auto [d, k] = pq.top();
    pq.pop();
    if (d > dist[k]) continue;
    const int i = k / ng, j = k % ng;
    for (int di = -1; di <= 1; ++di)
      for (int dj = -1; dj <= 1; ++dj) {
        if (di == 0 && dj == 0) continue;
        const int i2 = i + di, j2 = j + dj;
        if (i2 < 0 || i2 >= ns || j2 < 0 || j2 >= ng) continue;
        const double nd = d + edge(i, j, i2, j2);
        if (nd < dist[idx(i2, j2)]) {
          dist[idx(i2, j2)] = nd;
          pq.push({nd, idx(i2, j2)});
        }
      }
  }
  const int ib = std::clamp(static_cast<int>(std::round(s_b / c.smax * (ns - 1))), 0, ns - 1);
  const int jb = std::clamp(static_cast<int>(std::round(dgamma / gmax * (ng - 1))), 0, ng - 1);
  return dist[idx(ib, jb)];
}

inline DistanceResult distance(const Context& c, double s_a, double s_b, double dgamma,
                               const GeodesicOptions& opt) {
  DistanceResult out;
  dgamma = std::abs(std::remainder(dgamma, 2.0 * M_PI));  // into [0, pi]

  const double tol_pt = 1e-12 * std::max(1.0, c.smax);
  if (std::abs(s_a - s_b) < tol_pt &&
      (dgamma < 1e-12 || std::min(s_a, s_b) < tol_pt ||
       std::min(c.smax - s_a, c.smax - s_b) < tol_pt)) {
    out.length = 0.0;
    return out;
  }

  double best = std::numeric_limits<double>::infinity();
  // meridian path (same angle)
  if (dgamma < 1e-9) best = std::min(best, std::abs(s_a - s_b));
  // paths through either pole (upper bounds; exact for dgamma == pi)
  best = std::min(best, s_a + s_b);
  best = std::min(best, (c.smax - s_a) + (c.smax - s_b));
  // meridian plus a parallel arc: a valid path for every angle gap, and the
  // accurate candidate in the small-gap regime the launch fan cannot bracket
  best = std::min(best, std::abs(s_a - s_b) +
                            dgamma * std::min(c.psi_at(s_a), c.psi_at(s_b)));
  // both points inside one polar cap: flat law of cosines
  if (s_a < c.cap_s && s_b < c.cap_s)
    best = std::min(best, std::sqrt(s_a * s_a + s_b * s_b -
                                    2.0 * s_a * s_b * std::cos(dgamma)));
  if (s_a > c.smax - c.cap_s && s_b > c.smax - c.cap_s) {
    const double ta = c.smax - s_a, tb = c.smax - s_b;
    best = std::min(best, std::sqrt(ta * ta + tb * tb - 2.0 * ta * tb * std::cos(dgamma)));
  }
  if (dgamma < 1e-9) {
    out.length = best;
    return out;
  }

  // Shoot from the endpoint farther from the poles.
  double sa = s_a, sb = s_b;
  if (std::min(s_b, c.smax - s_b) > std::min(s_a, c.smax - s_a)) std::swap(sa, sb);
  const double u_max = 1.2 * c.smax;

  bool bracketed = false;
  if (std::min(sa, c.smax - sa) > 1e-6 * c.smax) {
    const int m = opt.fan_rays;
    std::vector<double> thetas(m), miss(m, std::numeric_limits<double>::quiet_NaN());
    std::vector<double> ulen(m, 0.0);
    for (int k = 0; k < m; ++k) {
      thetas[k] = M_PI * (k + 0.5) / m;
      auto tr = trace_ray(c, sa, thetas[k], u_max, opt, false);
      if (auto cr = gamma_crossing(tr.samples, dgamma)) {
        miss[k] = cr->second - sb;
        ulen[k] = cr->first;
      }
    }
    for (int k = 0; k + 1 < m; ++k) {
      if (std::isnan(miss[k]) || std::isnan(miss[k + 1])) continue;
      if (miss[k] == 0.0) {
        best = std::min(best, ulen[k]);
        bracketed = true;
        continue;
      }
      if (miss[k] * miss[k + 1] > 0.0) continue;
      bracketed = true;
      double lo = thetas[k], hi = thetas[k + 1];
      double flo = miss[k];
      double ubest = std::min(ulen[k] + std::abs(miss[k]), ulen[k + 1] + std::abs(miss[k + 1]));
      for (int it = 0; it < opt.refine_iters; ++it) {
        const double mid = 0.5 * (lo + hi);
        auto tr = trace_ray(c, sa, mid, u_max, opt, false);
        auto cr = gamma_crossing(tr.samples, dgamma);
        if (!cr) break;
        const double fm = cr->second - sb;
        ubest = std::min(ubest, cr->first + std::abs(fm));
        if (std::abs(fm) < 1e-9 * c.smax) break;
        if (flo * fm <= 0.0) {
          hi = mid;
        } else {
          lo = mid;
          flo = fm;
        }
      }
      best = std::min(best, ubest);
    }
  }

  if (!bracketed && dgamma > 1e-6 && dgamma < M_PI - 1e-6 &&
      std::min({s_a, s_b, c.smax - s_a, c.smax - s_b}) > c.cap_s) {
    // No launch angle bracketed the target: graph fallback, reduced accuracy.
    const double dd = dijkstra_distance(c, s_a, s_b, dgamma);
    if (dd < best) {
      best = dd;
      out.fallback = true;
    }
  }
  out.length = best;
  return out;
}

}  // namespace geo

/// Minimizing geodesic length between two points of the warped manifold,
/// reduced to the meridian surface.  Zero iff the points coincide.
inline DistanceResult geodesic_distance_ex(const WarpedProfile& p, MeridianPoint a,
                                           MeridianPoint b,
                                           const GeodesicOptions& opt = {}) {
  const auto c = geo::make_context(p);
  return geo::distance(c, c.s_of_x(a.x), c.s_of_x(b.x), b.angle - a.angle, opt);
}

inline double geodesic_distance(const WarpedProfile& p, MeridianPoint a, MeridianPoint b) {
  return geodesic_distance_ex(p, a, b).length;
}

/// Volume of the unit sphere S^k.
inline double unit_sphere_volume(int k) {
  return 2.0 * std::pow(M_PI, 0.5 * (k + 1)) / std::tgamma(0.5 * (k + 1));
}

/// Geodesic ball volume about a center on the meridian.  Radii at or above
/// the pole-to-pole arclength saturate to the total volume of the space.
inline BallVolume ball_volume_ex(const WarpedProfile& p, MeridianPoint center, double radius,
                                 const GeodesicOptions& opt = {}) {
  if (!(radius > 0.0)) throw InvalidInput("ball_volume: radius must be positive");
  const auto c = geo::make_context(p);
  const int n = p.dim;

  // total volume of the space: omega_{n-1} int psi^{n-1} ds
  double total = 0.0;
  for (size_t i = 0; i + 1 < c.s.size(); ++i) {
    const double pa = std::pow(c.psi[i], n - 1);
    const double pb = std::pow(c.psi[i + 1], n - 1);
    total += 0.5 * (pa + pb) * (c.s[i + 1] - c.s[i]);
  }
  total *= unit_sphere_volume(n - 1);

  BallVolume out;
  if (radius >= c.smax) {
    out.volume = total;
    out.saturated = true;
    return out;
  }

  const double sc = c.s_of_x(center.x);
  if (sc < c.cap_s || sc > c.smax - c.cap_s) {
    // center at (or next to) a pole: the ball is the arclength sublevel set
    const bool left = sc < c.cap_s;
    double vol = 0.0;
    const int steps = 2048;
    for (int k = 0; k < steps; ++k) {
      const double u0 = radius * k / steps, u1 = radius * (k + 1) / steps;
      const double sv0 = left ? u0 : c.smax - u0;
      const double sv1 = left ? u1 : c.smax - u1;
      const double f0 = std::pow(std::max(c.psi_at(sv0), 0.0), n - 1);
      const double f1 = std::pow(std::max(c.psi_at(sv1), 0.0), n - 1);
      vol += 0.5 * (f0 + f1) * (u1 - u0);
    }
    out.volume = std::min(vol * unit_sphere_volume(n - 1), total);
    return out;
  }

  // polar fan quadrature with Jacobi fields; the tracer step divides the
  // radius exactly so the accumulation stops at rho, not one step past it
  GeodesicOptions ray_opt = opt;
  const double h0 = c.smax * opt.step_frac;
  const int per_ray = std::max<int>(48, static_cast<int>(std::ceil(radius / h0)));
  ray_opt.step_frac = radius / per_ray / c.smax;
  const int m = opt.volume_rays;
  double acc = 0.0;
  for (int k = 0; k < m; ++k) {
    const double th = M_PI * (k + 0.5) / m;
    auto tr = geo::trace_ray(c, sc, th, radius * (1.0 + 1e-12), ray_opt, true, radius);
    acc += tr.volume;
  }
  out.volume = std::min(acc * (M_PI / m) * unit_sphere_volume(n - 2), total);
  out.saturated = false;
  return out;
}

inline double ball_volume(const WarpedProfile& p, MeridianPoint center, double radius) {
  return ball_volume_ex(p, center, radius).volume;
}

}  // namespace ricci
