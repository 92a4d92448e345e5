#pragma once

// Finite-metric-space toolkit: geodesic-ball sampling from warped profiles,
// correspondence-distortion Gromov-Hausdorff bounds with exact brute force
// on small instances, approximation-map checking, and the distance
// distortion ledger along a flow trace.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "ricci/functionals.hpp"
#include "ricci/geodesic.hpp"

namespace ricci {

/// A pointed finite metric space.
struct FiniteMetricSpace {
  std::vector<std::string> labels;
  std::vector<MeridianPoint> coords;       // empty for abstract spaces
  std::vector<std::vector<double>> dist;   // symmetric, zero diagonal
  int base = 0;
  bool truncated = false;  // sampling returned fewer points than requested

  int size() const { return static_cast<int>(dist.size()); }
  double d(int i, int j) const { return dist[i][j]; }
};

/// Validate symmetry, zero diagonal, nonnegativity, and the triangle
/// inequality within tol.
inline void require_valid(const FiniteMetricSpace& X, double tol = 1e-9) {
  const int n = X.size();
  if (n == 0) throw InvalidInput("metric space: empty");
  if (X.base < 0 || X.base >= n) throw InvalidInput("metric space: base out of range");
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(X.dist[i].size()) != n)
      throw InvalidInput("metric space: distance matrix must be square");
    if (X.dist[i][i] != 0.0) throw InvalidInput("metric space: nonzero diagonal");
    for (int j = 0; j < n; ++j) {
      if (!(X.dist[i][j] >= 0.0)) throw InvalidInput("metric space: negative distance");
      if (std::abs(X.dist[i][j] - X.dist[j][i]) > tol)
        throw InvalidInput("metric space: asymmetric distances");
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (X.dist[i][j] > X.dist[i][k] + X.dist[k][j] + tol)
          throw InvalidInput("metric space: triangle inequality violated");
}

inline double diameter(const FiniteMetricSpace& X) {
  double m = 0.0;
  for (const auto& row : X.dist)
    for (double v : row) m = std::max(m, v);
  return m;
}

/// Deterministic stratified sample of k points inside the geodesic ball
/// B(center, radius): the center plus points placed along a launch-angle fan
/// at fractional radii, with pairwise distances from the geodesic solver.
inline FiniteMetricSpace sample_ball(const WarpedProfile& p, MeridianPoint center,
                                     double radius, int k,
                                     const GeodesicOptions& opt = {}) {
  if (k < 1) throw InvalidInput("sample_ball: need k >= 1");
  if (!(radius > 0.0)) throw InvalidInput("sample_ball: radius must be positive");
  const auto c = geo::make_context(p);
  const double sc = c.s_of_x(center.x);

  std::vector<MeridianPoint> pts{center};
  if (k > 1) {
    const int shells = std::max(1, static_cast<int>(std::floor(std::sqrt(k - 1.0))));
    int placed = 0;
    for (int i = 0; placed < k - 1 && i < 4 * k; ++i) {
      const int shell = 1 + i % shells;
      const double frac = static_cast<double>(shell) / shells;
      const double u = std::min(radius * frac, 0.98 * c.smax);
      // golden-angle spiral over the full circle of launch directions
      const double theta_full = std::fmod(i * 2.399963229728653, 2.0 * M_PI);
      const double theta0 = std::min(std::abs(theta_full - M_PI), M_PI - 1e-9);
      const double sign = theta_full > M_PI ? -1.0 : 1.0;
      auto tr = geo::trace_ray(c, sc, std::max(theta0, 1e-9), 1.001 * u, opt, false);
      const auto& last = tr.samples.back();
      MeridianPoint q{c.x_of_s(last.s), center.angle + sign * last.gamma};
      bool dup = false;
      for (const auto& e : pts)
        if (std::abs(c.s_of_x(e.x) - c.s_of_x(q.x)) < 1e-9 * c.smax &&
            std::abs(std::remainder(e.angle - q.angle, 2.0 * M_PI)) < 1e-9)
          dup = true;
      if (!dup) {
        pts.push_back(q);
        ++placed;
      }
    }
  }

  FiniteMetricSpace X;
  X.truncated = static_cast<int>(pts.size()) < k;
  X.base = 0;
  X.coords = pts;
  const int n = static_cast<int>(pts.size());
  X.labels.resize(n);
  for (int i = 0; i < n; ++i) X.labels[i] = "p" + std::to_string(i);
  X.dist.assign(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double dij = geo::distance(c, c.s_of_x(pts[i].x), c.s_of_x(pts[j].x),
                                       pts[j].angle - pts[i].angle, opt)
                             .length;
      X.dist[i][j] = dij;
      X.dist[j][i] = dij;
    }
  return X;
}

/// A correspondence between two finite spaces: a relation covering both.
struct Correspondence {
  std::vector<std::pair<int, int>> relation;
};

inline bool covers_both(const Correspondence& corr, int nx, int ny) {
  std::vector<bool> cx(nx, false), cy(ny, false);
  for (auto [i, j] : corr.relation) {
    if (i < 0 || i >= nx || j < 0 || j >= ny) return false;
    cx[i] = true;
    cy[j] = true;
  }
  return std::all_of(cx.begin(), cx.end(), [](bool b) { return b; }) &&
         std::all_of(cy.begin(), cy.end(), [](bool b) { return b; });
}

/// Half the distortion of a correspondence: an upper bound for the
/// Gromov-Hausdorff distance.
inline double gh_upper_bound(const FiniteMetricSpace& X, const FiniteMetricSpace& Y,
                             const Correspondence& corr) {
  if (!covers_both(corr, X.size(), Y.size()))
    throw InvalidInput("gh_upper_bound: correspondence must cover both spaces");
  double dis = 0.0;
  for (size_t a = 0; a < corr.relation.size(); ++a)
    for (size_t b = a; b < corr.relation.size(); ++b) {
      const auto [x1, y1] = corr.relation[a];
      const auto [x2, y2] = corr.relation[b];
      dis = std::max(dis, std::abs(X.d(x1, x2) - Y.d(y1, y2)));
    }
  return 0.5 * dis;
}

/// Exact Gromov-Hausdorff distance of small finite spaces by enumerating
/// minimal correspondences (graphs of a function each way).  Guarded to
/// |X|, |Y| <= 5.
inline double gh_brute_force(const FiniteMetricSpace& X, const FiniteMetricSpace& Y) {
  const int nx = X.size(), ny = Y.size();
  if (nx > 5 || ny > 5)
    throw InvalidInput("gh_brute_force: spaces larger than 5 points are refused");
  if (nx == 0 || ny == 0) throw InvalidInput("gh_brute_force: empty space");

  // enumerate f: X -> Y and g: Y -> X; the union of their graphs covers both,
  // and some minimal correspondence always has this form
  std::vector<int> f(nx, 0), g(ny, 0);
  double best = std::numeric_limits<double>::infinity();
  auto dis_fg = [&]() {
    double dis = 0.0;
    for (int i = 0; i < nx; ++i)
      for (int j = i; j < nx; ++j) {
        dis = std::max(dis, std::abs(X.d(i, j) - Y.d(f[i], f[j])));
        if (dis >= best) return dis;
      }
    for (int i = 0; i < ny; ++i)
      for (int j = i; j < ny; ++j) {
        dis = std::max(dis, std::abs(X.d(g[i], g[j]) - Y.d(i, j)));
        if (dis >= best) return dis;
      }
    for (int i = 0; i < nx; ++i)
      for (int j = 0; j < ny; ++j) {
        dis = std::max(dis, std::abs(X.d(i, g[j]) - Y.d(f[i], j)));
        if (dis >= best) return dis;
      }
    return dis;
  };

  while (true) {
    // iterate over g for fixed f
    while (true) {
      best = std::min(best, dis_fg());
      int k = 0;
      while (k < ny && ++g[k] == nx) g[k++] = 0;
      if (k == ny) break;
    }
    int k = 0;
    while (k < nx && ++f[k] == ny) f[k++] = 0;
    if (k == nx) break;
  }
  return 0.5 * best;
}

/// Report of the three approximation-map conditions between pointed spaces
/// evaluated on finite samples: base points nearly match, the 1/eps ball of
/// the target is nearly covered by the image, and distances inside the 1/eps
/// ball are preserved to within eps.
struct EpsApproxReport {
  bool base_ok = false;
  bool covering_ok = false;
  bool distortion_ok = false;
  bool ok = false;
};

inline EpsApproxReport check_eps_approx(const std::vector<int>& map,
                                        const FiniteMetricSpace& X,
                                        const FiniteMetricSpace& Y, double eps) {
  if (static_cast<int>(map.size()) != X.size())
    throw InvalidInput("check_eps_approx: map must be total on X");
  for (int v : map)
    if (v < 0 || v >= Y.size()) throw InvalidInput("check_eps_approx: map image out of range");
  if (!(eps > 0.0)) throw InvalidInput("check_eps_approx: eps must be positive");

  EpsApproxReport rep;
  const double ball = 1.0 / eps;

  rep.base_ok = Y.d(map[X.base], Y.base) < eps;

  rep.covering_ok = true;
  for (int y = 0; y < Y.size(); ++y) {
    if (!(Y.d(y, Y.base) < ball)) continue;
    bool covered = false;
    for (int x = 0; x < X.size(); ++x) {
      if (!(X.d(x, X.base) < ball)) continue;
      if (Y.d(y, map[x]) < eps) {
        covered = true;
        break;
      }
    }
    if (!covered) {
      rep.covering_ok = false;
      break;
    }
  }

  rep.distortion_ok = true;
  for (int x1 = 0; x1 < X.size() && rep.distortion_ok; ++x1) {
    if (!(X.d(x1, X.base) < ball)) continue;
    for (int x2 = 0; x2 < X.size(); ++x2) {
      if (!(X.d(x2, X.base) < ball)) continue;
      if (!(std::abs(X.d(x1, x2) - Y.d(map[x1], map[x2])) < eps)) {
        rep.distortion_ok = false;
        break;
      }
    }
  }

  rep.ok = rep.base_ok && rep.covering_ok && rep.distortion_ok;
  return rep;
}

/// Distance-distortion ledger: for chosen point pairs and consecutive time
/// windows [t_a, t_b] of the trace, compare |log(d_b/d_a)| with the Ricci
/// sup-norm integral over the window.  The inequality
///   |log(d_b/d_a)| <= int_a^b P dt
/// holds along the flow; margins below -(1e-3 + solver tolerance) fail.
struct LedgerRow {
  int pair = 0;
  double t_a = 0.0, t_b = 0.0;
  double log_ratio = 0.0;
  double int_ric = 0.0;
  double margin = 0.0;  // int_ric - |log_ratio|
  bool pass = false;
  bool fallback = false;  // distance solver fell back to the graph search
};

struct LedgerReport {
  std::vector<Scenario::PointPair> pairs;
  std::vector<LedgerRow> rows;
  bool all_pass = true;
  double discretization_tol = 0.0;
};

inline LedgerReport distortion_ledger(const FlowTrace& trace,
                                      const std::vector<Scenario::PointPair>& pairs,
                                      int max_windows = 48,
                                      const GeodesicOptions& opt = {}) {
  if (trace.snapshots() < 2) throw InvalidInput("distortion_ledger: need >= 2 snapshots");
  for (const auto& pr : pairs) {
    if (pr.x_a < 0 || pr.x_a > 1 || pr.x_b < 0 || pr.x_b > 1)
      throw InvalidInput("distortion_ledger: pair coordinates out of range");
  }
  LedgerReport rep;
  rep.pairs = pairs;
  // distance solver tolerance: fan interpolation plus window integration
  rep.discretization_tol = 2e-3;
  const double tol = 1e-3 + rep.discretization_tol;

  auto s = sup_norms(trace);
  const int n = trace.snapshots();
  const int count = std::min(max_windows, n - 1);
  std::vector<int> idx(count + 1);
  for (int k = 0; k <= count; ++k)
    idx[k] = static_cast<int>(std::llround(static_cast<double>(k) * (n - 1) / count));

  // cache distances per snapshot index
  std::vector<std::vector<double>> dcache(pairs.size(), std::vector<double>(n, -1.0));
  std::vector<std::vector<bool>> fcache(pairs.size(), std::vector<bool>(n, false));
  auto dist_at = [&](size_t pr, int k) {
    if (dcache[pr][k] < 0.0) {
      auto r = geodesic_distance_ex(trace.profiles[k], {pairs[pr].x_a, pairs[pr].angle_a},
                                    {pairs[pr].x_b, pairs[pr].angle_b}, opt);
      dcache[pr][k] = r.length;
      fcache[pr][k] = r.fallback;
    }
    return dcache[pr][k];
  };

  for (size_t pr = 0; pr < pairs.size(); ++pr) {
    for (int k = 0; k + 1 <= count; ++k) {
      const int ia = idx[k], ib = idx[k + 1];
      if (ia == ib) continue;
      LedgerRow row;
      row.pair = static_cast<int>(pr);
      row.t_a = trace.times[ia];
      row.t_b = trace.times[ib];
      const double da = dist_at(pr, ia);
      const double db = dist_at(pr, ib);
      row.fallback = fcache[pr][ia] || fcache[pr][ib];
      row.log_ratio = std::abs(std::log(db / da));
      row.int_ric = detail::integrate_window(s.t, s.sup_ric, row.t_a, row.t_b);
      row.margin = row.int_ric - row.log_ratio;
      row.pass = row.margin >= -tol;
      rep.all_pass = rep.all_pass && row.pass;
      rep.rows.push_back(row);
    }
  }
  return rep;
}

}  // namespace ricci
