#pragma once

// Scalar functionals of a flow trace: the three curvature sup-norms and
// their singular-time-weighted products, the dyadic doubling decomposition
// of sup|Rm| with its per-level Ricci integrals, cumulative divergence
// integrals, and the volume-ratio (non-collapsing) monitor.

#include <cmath>
#include <optional>
#include <vector>

#include "ricci/flow.hpp"
#include "ricci/geodesic.hpp"

namespace ricci {

/// Per-snapshot sup-norms, with the (T_hat - t)-weighted products filled in
/// once a singular-time estimate is supplied.
struct FunctionalSeries {
  std::vector<double> t;
  std::vector<double> sup_scalar;     // O = sup |R|
  std::vector<double> sup_ric;        // P = sup |Ric|
  std::vector<double> sup_rm;         // Q = sup |Rm|
  std::vector<double> sup_ric_minus;  // sup |Ric_-|

  std::optional<double> t_hat;
  std::vector<double> lambdas;
  // products, aligned with t; empty until with_products()
  std::vector<double> prod_ric;        // (T-t) P
  std::vector<double> prod_rm;         // (T-t) Q
  std::vector<double> prod_scalar;     // (T-t) O
  std::vector<double> prod_sqrt_oq;    // (T-t) sqrt(O Q)
  std::vector<double> prod_ric_minus;  // (T-t) sup|Ric_-|
  std::vector<std::vector<double>> q_t_pow;  // Q (T-t)^lambda per lambda

  int size() const { return static_cast<int>(t.size()); }

  void with_products(double that, std::vector<double> lam) {
    t_hat = that;
    lambdas = std::move(lam);
    const int n = size();
    prod_ric.resize(n);
    prod_rm.resize(n);
    prod_scalar.resize(n);
    prod_sqrt_oq.resize(n);
    prod_ric_minus.resize(n);
    q_t_pow.assign(lambdas.size(), std::vector<double>(n));
    for (int i = 0; i < n; ++i) {
      const double w = that - t[i];
      prod_ric[i] = w * sup_ric[i];
      prod_rm[i] = w * sup_rm[i];
      prod_scalar[i] = w * sup_scalar[i];
      prod_sqrt_oq[i] = w * std::sqrt(sup_scalar[i] * sup_rm[i]);
      prod_ric_minus[i] = w * sup_ric_minus[i];
      for (size_t l = 0; l < lambdas.size(); ++l)
        q_t_pow[l][i] = sup_rm[i] * std::pow(std::max(w, 0.0), lambdas[l]);
    }
  }

  /// Index of the first snapshot in the last decade of Q.
  int last_decade_begin() const {
    const double q_end = sup_rm.back();
    for (int i = 0; i < size(); ++i)
      if (sup_rm[i] >= 0.1 * q_end) return i;
    return size() - 1;
  }
};

inline FunctionalSeries sup_norms(const FlowTrace& trace) {
  FunctionalSeries s;
  s.t = trace.times;
  const int n = trace.snapshots();
  s.sup_scalar.resize(n);
  s.sup_ric.resize(n);
  s.sup_rm.resize(n);
  s.sup_ric_minus.resize(n);
  for (int i = 0; i < n; ++i) {
    s.sup_scalar[i] = trace.functionals[i].sup_scalar;
    s.sup_ric[i] = trace.functionals[i].sup_ric;
    s.sup_rm[i] = trace.functionals[i].sup_rm;
    s.sup_ric_minus[i] = trace.functionals[i].sup_ric_minus;
  }
  return s;
}

namespace detail {

/// P linearly interpolated at time tv inside the snapshot grid.
inline double interp_linear(const std::vector<double>& t, const std::vector<double>& f,
                            double tv) {
  if (tv <= t.front()) return f.front();
  if (tv >= t.back()) return f.back();
  int lo = 0, hi = static_cast<int>(t.size()) - 1;
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    if (t[mid] <= tv) lo = mid; else hi = mid;
  }
  const double w = (tv - t[lo]) / (t[lo + 1] - t[lo]);
  return (1.0 - w) * f[lo] + w * f[lo + 1];
}

/// Trapezoid integral of f over [a, b] on the snapshot grid, with linear
/// interpolation at the partial end segments.
inline double integrate_window(const std::vector<double>& t, const std::vector<double>& f,
                               double a, double b) {
  if (b <= a) return 0.0;
  const int n = static_cast<int>(t.size());
  double acc = 0.0;
  double prev_t = a, prev_f = interp_linear(t, f, a);
  for (int i = 0; i < n; ++i) {
    if (t[i] <= a) continue;
    if (t[i] >= b) break;
    acc += 0.5 * (prev_f + f[i]) * (t[i] - prev_t);
    prev_t = t[i];
    prev_f = f[i];
  }
  acc += 0.5 * (prev_f + interp_linear(t, f, b)) * (b - prev_t);
  return acc;
}

}  // namespace detail

/// Dyadic doubling decomposition: crossing times s_i with Q(s_i) = 2^i Q(t0)
/// by log-linear inverse interpolation, and the Ricci integral over each
/// complete doubling interval.
struct DyadicDecomposition {
  double t0 = 0.0;
  struct Level {
    int index = 0;          // i
    double s_time = 0.0;    // s_i
    double integral = 0.0;  // int_{s_i}^{s_{i+1}} P dt
  };
  std::vector<Level> levels;
  double epsilon_hat = 0.0;  // min over levels of the integral
  bool empty() const { return levels.empty(); }
};

inline DyadicDecomposition dyadic_decompose(const FunctionalSeries& s, double t0) {
  DyadicDecomposition d;
  d.t0 = t0;
  const int n = s.size();
  if (n < 2) return d;
  const double q0 = detail::interp_linear(s.t, s.sup_rm, t0);
  if (!(q0 > 0.0)) return d;

  // crossing times of Q = 2^i q0, log-linear between snapshots
  std::vector<double> cross{t0};
  int level = 1;
  for (int i = 0; i + 1 < n; ++i) {
    if (s.t[i + 1] <= t0) continue;
    while (true) {
      const double target = std::ldexp(q0, level);  // 2^level * q0
      const double qa = s.sup_rm[i], qb = s.sup_rm[i + 1];
      if (!(qb >= target) || !(qa < target)) break;
      const double la = std::log(qa), lb = std::log(qb);
      const double w = (std::log(target) - la) / (lb - la);
      const double tc = s.t[i] + w * (s.t[i + 1] - s.t[i]);
      if (tc > t0) {
        cross.push_back(tc);
        ++level;
      } else {
        break;
      }
    }
  }
  if (cross.size() < 2) return d;  // no doubling after t0

  d.epsilon_hat = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i + 1 < cross.size(); ++i) {
    DyadicDecomposition::Level lv;
    lv.index = static_cast<int>(i);
    lv.s_time = cross[i];
    lv.integral = detail::integrate_window(s.t, s.sup_ric, cross[i], cross[i + 1]);
    d.levels.push_back(lv);
    d.epsilon_hat = std::min(d.epsilon_hat, lv.integral);
  }
  return d;
}

inline DyadicDecomposition dyadic_decompose(const FlowTrace& trace, double t0) {
  return dyadic_decompose(sup_norms(trace), t0);
}

/// Self-consistency check of the doubling-count bound: for every snapshot K
/// after t0,
///   Q(K)/Q(t0) <= 2^( int_{t0}^K P dt / epsilon_hat + 1 ).
/// Holds by construction up to interpolation error; a failure indicates an
/// implementation bug (or tampered data).
struct DoublingVerdict {
  bool pass = false;
  double min_slack_log2 = 0.0;  // min over K of exponent - log2 ratio
  double tightest_time = 0.0;
};

inline DoublingVerdict doubling_bound_check(const FunctionalSeries& s,
                                            const DyadicDecomposition& d) {
  DoublingVerdict v;
  if (d.empty() || !(d.epsilon_hat > 0.0)) return v;
  const double q0 = detail::interp_linear(s.t, s.sup_rm, d.t0);
  v.min_slack_log2 = std::numeric_limits<double>::infinity();
  for (int i = 0; i < s.size(); ++i) {
    if (s.t[i] <= d.t0) continue;
    const double ratio_log2 = std::log2(s.sup_rm[i] / q0);
    const double ip = detail::integrate_window(s.t, s.sup_ric, d.t0, s.t[i]);
    const double slack = (ip / d.epsilon_hat + 1.0) - ratio_log2;
    if (slack < v.min_slack_log2) {
      v.min_slack_log2 = slack;
      v.tightest_time = s.t[i];
    }
  }
  v.pass = v.min_slack_log2 >= -1e-9;
  return v;
}

inline DoublingVerdict doubling_bound_check(const FlowTrace& trace,
                                            const DyadicDecomposition& d) {
  return doubling_bound_check(sup_norms(trace), d);
}

/// Cumulative divergence integrals along the trace.
struct DivergenceSeries {
  std::vector<double> t;
  std::vector<double> cum_int_ric;       // int_0^t P dt'
  std::vector<double> cum_int_r_alpha;   // int_0^t int_X |R|^alpha dv dt'
  double alpha = 0.0;                    // (n+2)/2
  double growth_slope = 0.0;             // d(cum int P)/d log(1/(T-t)), last decade
  bool slope_available = false;
};

inline DivergenceSeries divergence_integrals(const FlowTrace& trace,
                                             std::optional<double> t_hat = std::nullopt) {
  DivergenceSeries out;
  const int n = trace.snapshots();
  out.t = trace.times;
  out.alpha = 0.5 * (trace.profiles.front().dim + 2);
  out.cum_int_ric.assign(n, 0.0);
  out.cum_int_r_alpha.assign(n, 0.0);

  const int dim = trace.profiles.front().dim;
  const double omega = unit_sphere_volume(dim - 1);
  auto spatial = [&](int k) {
    const auto& p = trace.profiles[k];
    const auto& c = trace.curvatures[k];
    const auto ell = detail::cells_of(p);
    double acc = 0.0;
    for (size_t i = 0; i < ell.size(); ++i) {
      const double fa = std::pow(std::abs(c.scalar[i]), out.alpha) * std::pow(p.psi[i], dim - 1);
      const double fb =
          std::pow(std::abs(c.scalar[i + 1]), out.alpha) * std::pow(p.psi[i + 1], dim - 1);
      acc += 0.5 * (fa + fb) * ell[i];
    }
    return omega * acc;
  };

  double prev_sp = spatial(0);
  for (int k = 1; k < n; ++k) {
    const double dt = trace.times[k] - trace.times[k - 1];
    out.cum_int_ric[k] =
        out.cum_int_ric[k - 1] +
        0.5 * (trace.functionals[k - 1].sup_ric + trace.functionals[k].sup_ric) * dt;
    const double sp = spatial(k);
    out.cum_int_r_alpha[k] = out.cum_int_r_alpha[k - 1] + 0.5 * (prev_sp + sp) * dt;
    prev_sp = sp;
  }

  if (t_hat && n >= 3) {
    // least squares of cumulative int P against log(1/(T-t)), last decade of Q
    auto s = sup_norms(trace);
    const int first = s.last_decade_begin();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (int k = first; k < n; ++k) {
      const double w = *t_hat - trace.times[k];
      if (!(w > 0.0)) continue;
      const double xv = std::log(1.0 / w);
      sx += xv;
      sy += out.cum_int_ric[k];
      sxx += xv * xv;
      sxy += xv * out.cum_int_ric[k];
      ++m;
    }
    if (m >= 3) {
      const double den = m * sxx - sx * sx;
      if (den != 0.0) {
        out.growth_slope = (m * sxy - sx * sy) / den;
        out.slope_available = true;
      }
    }
  }
  return out;
}

/// Volume-ratio monitor: at the node of max |Rm| of every snapshot,
///   r* = min(Q^{-1/2}, diameter/2),   kappa = vol(B(x, r*)) / r*^n.
struct KappaSeries {
  std::vector<double> t;
  std::vector<double> r_star;
  std::vector<double> kappa;
  std::vector<bool> skipped;
  double running_min = 0.0;
};

inline KappaSeries kappa_monitor(const FlowTrace& trace, int stride = 1) {
  KappaSeries out;
  out.running_min = std::numeric_limits<double>::infinity();
  const int n = trace.snapshots();
  const int dim = trace.profiles.front().dim;
  for (int k = 0; k < n; k += std::max(1, stride)) {
    const auto& f = trace.functionals[k];
    const auto& p = trace.profiles[k];
    const double r_star = std::min(1.0 / std::sqrt(f.sup_rm), 0.5 * f.diameter);
    double kap = 0.0;
    bool skip = false;
    try {
      const MeridianPoint center{p.grid.x[f.argmax_rm], 0.0};
      const double vol = ball_volume(p, center, r_star);
      kap = vol / std::pow(r_star, dim);
    } catch (const std::exception&) {
      skip = true;
    }
    out.t.push_back(trace.times[k]);
    out.r_star.push_back(r_star);
    out.kappa.push_back(kap);
    out.skipped.push_back(skip);
    if (!skip) out.running_min = std::min(out.running_min, kap);
  }
  return out;
}

}  // namespace ricci
