#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ricci/curvature.hpp"
#include "ricci/profile.hpp"

namespace ricci {

enum class ProfileFamily { round_sphere, dumbbell };

/// A complete run description.  Defaults follow the scenario-file defaults.
struct Scenario {
  int dim = 3;
  ProfileFamily family = ProfileFamily::round_sphere;

  // round_sphere
  double radius = 1.0;

  // dumbbell: psi = bump * sin(pi x) * (1 + (neck/bump - 1) G(x) sin^2(pi x))
  // with G a Gaussian of width neck_width centred at neck_center; phi = pi.
  double neck = 0.2;
  double bump = 1.0;
  double neck_center = 0.5;
  double neck_width = 0.18;
  double grid_packing = 0.0;  // >0 refines cells near the neck by this factor

  int grid_n = 200;
  double cfl = 0.4;
  double stop_q_ratio = 100.0;
  long max_steps = 4000000;
  int output_stride = 10;

  std::vector<double> lambda_list{1.0, 1.5, 2.0};
  int gh_sample_k = 12;

  struct PointPair {
    double x_a = 0.0, angle_a = 0.0, x_b = 1.0, angle_b = 0.0;
  };
  std::vector<PointPair> pairs;  // empty -> defaults chosen at run time

  std::string name = "scenario";
};

inline void validate_scenario(const Scenario& s) {
  if (s.dim < 3) throw InvalidInput("scenario: dimension must be >= 3");
  if (!(s.cfl > 0.0 && s.cfl < 1.0)) throw InvalidInput("scenario: cfl must lie in (0, 1)");
  if (!(s.stop_q_ratio > 1.0)) throw InvalidInput("scenario: stop_q_ratio must exceed 1");
  if (s.grid_n < 50) throw InvalidInput("scenario: grid_n must be >= 50");
  if (s.max_steps < 0) throw InvalidInput("scenario: max_steps must be >= 0");
  if (s.output_stride < 1) throw InvalidInput("scenario: output_stride must be >= 1");
  if (s.family == ProfileFamily::round_sphere) {
    if (!(s.radius > 0.0)) throw InvalidInput("scenario: radius must be positive");
  } else {
    if (!(s.neck > 0.0 && s.bump > 0.0)) throw InvalidInput("scenario: neck/bump must be positive");
    if (!(s.neck < s.bump)) throw InvalidInput("scenario: neck must be smaller than bump");
    if (!(s.neck_center > 0.0 && s.neck_center < 1.0))
      throw InvalidInput("scenario: neck_center must lie in (0, 1)");
    if (!(s.neck_width > 0.0 && s.neck_width < 0.5))
      throw InvalidInput("scenario: neck_width must lie in (0, 0.5)");
  }
  for (double l : s.lambda_list)
    if (!(l > 0.0)) throw InvalidInput("scenario: lambda values must be positive");
  if (s.gh_sample_k < 1) throw InvalidInput("scenario: gh_sample_k must be >= 1");
}

/// Build the initial metric of a scenario.  Symmetric families are
/// constructed mirror-exactly: values are computed on the left half and
/// copied to the right half so reflection symmetry holds to the last bit.
inline WarpedProfile initial_profile(const Scenario& sc) {
  validate_scenario(sc);
  const int N = sc.grid_n;
  WarpedProfile p;
  p.dim = sc.dim;
  p.time = 0.0;

  const bool symmetric =
      sc.family == ProfileFamily::round_sphere || std::abs(sc.neck_center - 0.5) < 1e-14;

  if (sc.family == ProfileFamily::round_sphere) {
    p.grid = make_uniform_grid(N);
    const double r0 = sc.radius;
    p.phi.assign(N + 1, M_PI * r0);
    p.psi.resize(N + 1);
    for (int i = 0; i <= N / 2; ++i) p.psi[i] = r0 * std::sin(M_PI * p.grid.x[i]);
    for (int i = N / 2 + 1; i <= N; ++i) p.psi[i] = p.psi[N - i];
    p.psi[0] = 0.0;
    p.psi[N] = 0.0;
  } else {
    p.grid = (sc.grid_packing > 0.0)
                 ? make_graded_grid(N, sc.neck_center, 2.0 * sc.neck_width, sc.grid_packing)
                 : make_uniform_grid(N);
    p.phi.assign(N + 1, M_PI);
    p.psi.resize(N + 1);
    auto value = [&](double x) {
      const double u = (x - sc.neck_center) / sc.neck_width;
      const double g = std::exp(-0.5 * u * u);
      const double sx = std::sin(M_PI * x);
      const double blend = 1.0 + (sc.neck / sc.bump - 1.0) * g * sx * sx;
      return sc.bump * sx * blend;
    };
    if (symmetric) {
      for (int i = 0; i <= N / 2; ++i) p.psi[i] = value(p.grid.x[i]);
      for (int i = N / 2 + 1; i <= N; ++i) p.psi[i] = p.psi[N - i];
    } else {
      for (int i = 0; i <= N; ++i) p.psi[i] = value(p.grid.x[i]);
    }
    p.psi[0] = 0.0;
    p.psi[N] = 0.0;
    // The family keeps |dpsi/ds| <= 1; reject parameter sets that break it.
    // The margin absorbs one-sided stencil truncation at the poles.
    DerivTable st = s_table(p);
    for (int i = 0; i <= N; ++i) {
      const double slope = st.d1(p.psi, i);
      if (std::abs(slope) > 1.0 + 5e-4)
        throw InvalidInput("initial_profile: |dpsi/ds| <= 1 violated at node " +
                           std::to_string(i));
    }
  }
  p.cell_s = detail::cells_of(p);

  require_valid(p);
  return p;
}

namespace detail {

/// Flow state in staggered form: psi at the nodes and the arclength of every
/// grid cell.  Evolving cell arclengths instead of the nodal radial factor
/// keeps the pole closures benign: a cell-length perturbation only shifts
/// the arclength coordinates of its neighbours (an O(1) coupling), whereas
/// perturbations of a nodal phi enter the stiff 1/psi reaction terms through
/// divided differences with gain ~ 1/ds^2 and destabilize the pole region at
/// a rate that no stable time step can control.
struct FlowState {
  std::vector<double> psi;
  std::vector<double> ell;  // per-cell arclengths, size psi.size()-1
  double time = 0.0;
};

inline FlowState state_of(const WarpedProfile& p) {
  FlowState st;
  st.psi = p.psi;
  st.ell = cells_of(p);
  st.time = p.time;
  return st;
}

inline WarpedProfile profile_of(const FlowState& st, const WarpedProfile& like) {
  WarpedProfile p;
  p.dim = like.dim;
  p.grid = like.grid;
  p.psi = st.psi;
  p.cell_s = st.ell;
  p.phi = phi_from_cells(p.grid, st.ell);
  p.time = st.time;
  return p;
}

/// Right-hand side of the reduced flow in staggered variables:
///   dpsi/dt = psi_ss - (n-2)(1 - psi_s^2)/psi        (nodes),
///   dell/dt = (n-1) <psi_ss/psi>_cell * ell           (cells),
/// which is the radial equation dphi/dt = (n-1)(psi_ss/psi) phi integrated
/// over a cell.  psi is pinned to zero at the poles.  All s-derivatives are
/// taken directly on the arclength grid defined by the cells.
struct FlowRhs {
  std::vector<double> dpsi, dell;
};

/// Cells at each pole whose dell/dt uses the ring-fitted q (see below), and
/// the node ring the even fit q(s) ~ a0 + a1 s^2 is taken over.  Local q at
/// the band's own nodes responds to band cell-length perturbations like a
/// cone defect, with gain ~ 1/ds^2; the ring nodes read none of the band
/// cells, which removes that feedback.
inline constexpr int kQBandCells = 3;
inline constexpr int kQRingLo = 6;
inline constexpr int kQRingHi = 11;

inline bool flow_rhs(const FlowState& st, int dim, const DerivTable& ds, FlowRhs& out) {
  const int n = static_cast<int>(st.psi.size());
  const int m = dim;
  out.dpsi.resize(n);
  out.dell.resize(n - 1);

  std::vector<double> q(n, 0.0);  // psi_ss / psi at interior nodes
  for (int i = 1; i + 1 < n; ++i) {
    if (!(st.psi[i] > 0.0)) return false;
    const double fs = ds.d1(st.psi, i);
    const double fss = ds.d2(st.psi, i);
    q[i] = fss / st.psi[i];
    out.dpsi[i] = fss - (m - 2) * (1.0 - fs * fs) / st.psi[i];
    if (!std::isfinite(out.dpsi[i])) return false;
  }
  out.dpsi[0] = 0.0;
  out.dpsi[n - 1] = 0.0;

  // q at the cell midpoints; pole-band cells take the even ring fit.
  std::vector<double> qc(n - 1);
  for (int i = 0; i + 1 < n; ++i) {
    if (i == 0) qc[i] = q[1];
    else if (i == n - 2) qc[i] = q[n - 2];
    else qc[i] = 0.5 * (q[i] + q[i + 1]);
  }
  if (n > 2 * (kQRingHi + 3)) {
    auto fit_band = [&](int pole, int dir) {
      // node offsets from this pole
      std::array<double, kQRingHi + 1> off{};
      for (int k = 1; k <= kQRingHi; ++k) {
        const int c = (dir > 0) ? (k - 1) : (n - 1 - k);
        off[k] = off[k - 1] + st.ell[c];
      }
      const double sref = off[kQRingHi];
      double a00 = 0, a01 = 0, a11 = 0, b0 = 0, b1 = 0;
      for (int k = kQRingLo; k <= kQRingHi; ++k) {
        const double u = (off[k] / sref) * (off[k] / sref);
        const double v = q[pole + dir * k];
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
      for (int k = 0; k < kQBandCells; ++k) {
        const int cell = (dir > 0) ? k : (n - 2 - k);
        const double smid = 0.5 * (off[k] + off[k + 1]);
        const double u = (smid / sref) * (smid / sref);
        qc[cell] = c0 + c1 * u;
      }
    };
    fit_band(0, +1);
    fit_band(n - 1, -1);
  }

  for (int i = 0; i + 1 < n; ++i) {
    out.dell[i] = (m - 1) * qc[i] * st.ell[i];
    if (!std::isfinite(out.dell[i])) return false;
  }
  return true;
}

/// Tapered fourth-difference smoothing of the cell-length array near the
/// poles, applied as an exact relabeling: node i moves by xi_i (the prefix
/// sum of the length corrections) and psi is advected accordingly,
///   ell_i += corr_i,   psi_i += xi_i * psi_s(i),   xi_0 = 0.
/// The correction is projected to zero sum inside the zone, so nodes beyond
/// it never move.  This damps the residual grid-scale label modes at the
/// band seams, which grow at ~ 1/(B ds^2) and are invisible to the geometry.
/// On uniform cells (round sphere) the filter vanishes identically.
inline double kLabelFilterStrength = 1.0;
inline constexpr int kLabelFilterInner = 10;
inline constexpr int kLabelFilterOuter = 20;

inline void label_filter_poles(FlowState& st, const DerivTable& ds) {
  const int n = static_cast<int>(st.psi.size());
  const int outer = kLabelFilterOuter;
  if (n < 2 * (outer + 4)) return;
  auto smoother = [](double u) { return u * u * u * (10.0 + u * (-15.0 + 6.0 * u)); };
  auto taper = [&](int k) {
    if (k <= kLabelFilterInner) return 1.0;
    if (k >= outer) return 0.0;
    return smoother(static_cast<double>(outer - k) / (outer - kLabelFilterInner));
  };
  // even reflection of the cell array across each pole
  auto cell_at = [&](int pole, int dir, int k) {
    const int idx = (k >= 0) ? k : (-1 - k);
    return st.ell[(dir > 0) ? idx : (n - 2 - idx)];
  };

  auto do_cap = [&](int pole, int dir) {
    std::array<double, kLabelFilterOuter + 1> corr{};
    double total = 0.0, wsum = 0.0;
    for (int k = 0; k <= outer; ++k) {
      const double d4 = (cell_at(pole, dir, k - 2) + cell_at(pole, dir, k + 2)) -
                        4.0 * (cell_at(pole, dir, k - 1) + cell_at(pole, dir, k + 1)) +
                        6.0 * cell_at(pole, dir, k);
      corr[k] = -(kLabelFilterStrength / 16.0) * taper(k) * d4;
      total += corr[k];
      wsum += taper(k);
    }
    const double shift = total / wsum;
    for (int k = 0; k <= outer; ++k) corr[k] -= shift * taper(k);

    double xi = 0.0;
    for (int k = 0; k <= outer; ++k) {
      const int cell = (dir > 0) ? k : (n - 2 - k);
      // node displacement after this cell's correction
      xi += corr[k];
      const int node = (dir > 0) ? (k + 1) : (n - 2 - k);
      if (node > 0 && node < n - 1 && k < outer)
        st.psi[node] += dir * xi * ds.d1(st.psi, node);
      st.ell[cell] += corr[k];
    }
  };
  do_cap(0, +1);
  do_cap(n - 1, -1);
}

}  // namespace detail

/// Smallest arclength cell, the length scale of the parabolic CFL bound.
inline double min_cell_arclength(const WarpedProfile& p) {
  const auto ell = detail::cells_of(p);
  return *std::min_element(ell.begin(), ell.end());
}

struct StepOutcome {
  bool ok = false;
  int overshoot_node = -1;  // interior node where psi dropped to <= 0
  WarpedProfile next;
};

/// One explicit Runge-Kutta-4 step of the reduced system on the fixed grid.
/// A step that drives psi to <= 0 at an interior node (or produces a
/// non-finite value) reports overshoot so the caller can halve dt and retry.
inline StepOutcome step(const WarpedProfile& p, double dt_time) {
  const int n = p.nodes();
  StepOutcome out;
  if (dt_time == 0.0) {
    out.ok = true;
    out.next = p;
    return out;
  }

  detail::FlowState y = detail::state_of(p);
  detail::FlowRhs k1, k2, k3, k4;
  detail::FlowState tmp = y;

  auto advance = [&](const detail::FlowState& base, const detail::FlowRhs& k, double a,
                     detail::FlowState& dst) {
    for (int i = 0; i < n; ++i) dst.psi[i] = base.psi[i] + a * k.dpsi[i];
    for (int i = 0; i + 1 < n; ++i) dst.ell[i] = base.ell[i] + a * k.dell[i];
  };
  auto admissible = [&](const detail::FlowState& s) {
    for (int i = 1; i + 1 < n; ++i)
      if (!(s.psi[i] > 0.0)) {
        out.overshoot_node = i;
        return false;
      }
    for (int i = 0; i + 1 < n; ++i)
      if (!(s.ell[i] > 0.0)) return false;
    return true;
  };
  // Compact first derivatives for the stepping stencils: the reaction term
  // must not read its own node through the slope, or the first interior
  // nodes pick up a positive eigenvalue ~ 1/ds^2 that no stable time step
  // controls.  Curvature reporting uses the wide table separately.
  auto rhs = [&](const detail::FlowState& s, detail::FlowRhs& k) {
    DerivTable ds(s.ell, /*compact_d1=*/true);
    return detail::flow_rhs(s, p.dim, ds, k);
  };

  if (!rhs(y, k1)) return out;
  advance(y, k1, 0.5 * dt_time, tmp);
  if (!admissible(tmp)) return out;
  if (!rhs(tmp, k2)) return out;
  advance(y, k2, 0.5 * dt_time, tmp);
  if (!admissible(tmp)) return out;
  if (!rhs(tmp, k3)) return out;
  advance(y, k3, dt_time, tmp);
  if (!admissible(tmp)) return out;
  if (!rhs(tmp, k4)) return out;

  const double w = dt_time / 6.0;
  detail::FlowState next = y;
  for (int i = 0; i < n; ++i)
    next.psi[i] = y.psi[i] + w * (k1.dpsi[i] + 2.0 * (k2.dpsi[i] + k3.dpsi[i]) + k4.dpsi[i]);
  for (int i = 0; i + 1 < n; ++i)
    next.ell[i] = y.ell[i] + w * (k1.dell[i] + 2.0 * (k2.dell[i] + k3.dell[i]) + k4.dell[i]);
  next.psi[0] = 0.0;
  next.psi[n - 1] = 0.0;
  next.time = p.time + dt_time;
  {
    DerivTable ds(next.ell, true);
    detail::label_filter_poles(next, ds);
  }
  if (!admissible(next)) return out;
  for (int i = 0; i < n; ++i)
    if (!std::isfinite(next.psi[i])) return out;
  for (int i = 0; i + 1 < n; ++i)
    if (!std::isfinite(next.ell[i])) return out;
  out.next = detail::profile_of(next, p);
  out.ok = true;
  out.overshoot_node = -1;
  return out;
}

enum class FlowStatus { completed, singularity_approached, breakdown };

inline const char* to_string(FlowStatus s) {
  switch (s) {
    case FlowStatus::completed: return "completed";
    case FlowStatus::singularity_approached: return "singularity-approached";
    case FlowStatus::breakdown: return "breakdown";
  }
  return "unknown";
}

/// Per-snapshot scalar diagnostics stored alongside the profile.
struct SnapshotFunctionals {
  double sup_scalar = 0.0;     // O = sup |R|
  double sup_ric = 0.0;        // P = sup |Ric|
  double sup_rm = 0.0;         // Q = sup |Rm|
  double sup_ric_minus = 0.0;  // sup |Ric_-|
  double diameter = 0.0;       // pole-to-pole arclength
  double neck_radius = 0.0;    // smallest interior waist (see below)
  int argmax_rm = 0;           // node attaining sup |Rm|
};

/// Time series of a whole run.
struct FlowTrace {
  Scenario scenario;
  std::vector<double> times;
  std::vector<WarpedProfile> profiles;
  std::vector<CurvatureField> curvatures;
  std::vector<SnapshotFunctionals> functionals;
  FlowStatus status = FlowStatus::completed;
  long steps_taken = 0;

  int snapshots() const { return static_cast<int>(times.size()); }
};

namespace detail {

/// Waist of the profile: the smallest interior local minimum of psi, or the
/// maximum of psi when no interior valley exists (round-type profiles).
inline double neck_radius_of(const WarpedProfile& p) {
  const int n = p.nodes();
  double best = std::numeric_limits<double>::infinity();
  bool found = false;
  for (int i = 2; i + 2 < n; ++i) {
    if (p.psi[i] <= p.psi[i - 1] && p.psi[i] <= p.psi[i + 1]) {
      best = std::min(best, p.psi[i]);
      found = true;
    }
  }
  if (found) return best;
  return *std::max_element(p.psi.begin(), p.psi.end());
}

inline SnapshotFunctionals snapshot_functionals(const WarpedProfile& p,
                                                const CurvatureField& c) {
  SnapshotFunctionals f;
  const int n = p.nodes();
  for (int i = 0; i < n; ++i) {
    f.sup_scalar = std::max(f.sup_scalar, std::abs(c.scalar[i]));
    f.sup_ric = std::max(f.sup_ric, c.norm_ric[i]);
    if (c.norm_rm[i] > f.sup_rm) {
      f.sup_rm = c.norm_rm[i];
      f.argmax_rm = i;
    }
    f.sup_ric_minus = std::max(f.sup_ric_minus, c.norm_ric_minus[i]);
  }
  // Near-ties for the |Rm| argmax are discretization noise; prefer the most
  // interior node so downstream ball centers stay away from the poles.
  const double tie = f.sup_rm * (1.0 - 1e-9);
  int best = f.argmax_rm;
  for (int i = 0; i < n; ++i) {
    if (c.norm_rm[i] >= tie) {
      const double di = std::min(p.grid.x[i], 1.0 - p.grid.x[i]);
      const double db = std::min(p.grid.x[best], 1.0 - p.grid.x[best]);
      if (di > db) best = i;
    }
  }
  f.argmax_rm = best;
  f.diameter = total_arclength(p);
  f.neck_radius = neck_radius_of(p);
  return f;
}

}  // namespace detail

/// Integrate a scenario to the requested curvature ratio.
///
/// The time step is adaptive:
///   dt = cfl * min( (min cell arclength)^2 / 2,  1 / (8 sup|Rm|) ).
/// The first term is the parabolic stability bound of the explicit scheme;
/// the second resolves the reaction timescale once curvature concentrates in
/// a region the spatial grid no longer refines.  Steps that overshoot psi
/// through zero are retried with halved dt up to a fixed cap.
inline FlowTrace run(const Scenario& sc) {
  FlowTrace trace;
  trace.scenario = sc;

  WarpedProfile p = initial_profile(sc);

  auto record = [&](const WarpedProfile& prof, const CurvatureField& curv) {
    trace.times.push_back(prof.time);
    trace.profiles.push_back(prof);
    trace.curvatures.push_back(curv);
    trace.functionals.push_back(detail::snapshot_functionals(prof, curv));
  };

  CurvatureField curv = curvature(p);
  record(p, curv);
  const double q0 = trace.functionals.front().sup_rm;
  const double q_stop = sc.stop_q_ratio * q0;
  double q_now = q0;

  trace.status = FlowStatus::completed;
  constexpr int kMaxHalvings = 60;

  for (long step_i = 1; step_i <= sc.max_steps; ++step_i) {
    const double ds = min_cell_arclength(p);
    double dt_time = sc.cfl * std::min(0.5 * ds * ds, 0.125 / q_now);

    StepOutcome oc;
    bool accepted = false;
    for (int h = 0; h <= kMaxHalvings; ++h) {
      oc = step(p, dt_time);
      if (oc.ok) {
        accepted = true;
        break;
      }
      dt_time *= 0.5;
    }
    if (!accepted) {
      trace.status = FlowStatus::breakdown;
      break;
    }
    p = std::move(oc.next);
    trace.steps_taken = step_i;

    try {
      curv = curvature(p);
    } catch (const NumericalBreakdown&) {
      trace.status = FlowStatus::breakdown;
      break;
    }
    double q = 0.0;
    for (double v : curv.norm_rm) q = std::max(q, v);
    q_now = q;

    const bool stopping = q_now >= q_stop;
    if (step_i % sc.output_stride == 0 || stopping || step_i == sc.max_steps) {
      record(p, curv);
    }
    if (stopping) {
      trace.status = FlowStatus::singularity_approached;
      break;
    }
  }
  return trace;
}

/// Least-squares singular-time estimate from the type-I ansatz Q ~ c/(T-t):
/// fit 1/Q against t over the last decade of Q and return the t-intercept.
struct SingularTimeFit {
  double t_hat = 0.0;
  double residual = 0.0;           // relative l2 misfit of 1/Q over the window
  double naive_lower_bound = 0.0;  // t_last + 1/(8 Q(t_last))
  int window_size = 0;
};

inline SingularTimeFit estimate_singular_time(std::span<const double> times,
                                              std::span<const double> q) {
  if (times.size() != q.size() || times.size() < 2)
    throw InvalidInput("estimate_singular_time: malformed series");
  const double q_end = q.back();
  if (!(q_end > 0.0)) throw InvalidInput("estimate_singular_time: Q must be positive");
  size_t first = q.size();
  for (size_t i = 0; i < q.size(); ++i) {
    if (q[i] >= 0.1 * q_end) {
      first = i;
      break;
    }
  }
  const size_t m = q.size() - first;
  if (m < 10)
    throw InvalidInput("estimate_singular_time: need >= 10 snapshots in the last decade of Q");

  // Ordinary least squares of y = 1/Q against t.
  double st = 0, sy = 0, stt = 0, sty = 0;
  for (size_t i = first; i < q.size(); ++i) {
    const double t = times[i];
    const double y = 1.0 / q[i];
    st += t;
    sy += y;
    stt += t * t;
    sty += t * y;
  }
  const double denom = m * stt - st * st;
  if (denom == 0.0) throw InvalidInput("estimate_singular_time: degenerate time window");
  const double b = (m * sty - st * sy) / denom;
  const double a = (sy - b * st) / m;
  if (!(b < 0.0))
    throw InvalidInput("estimate_singular_time: Q is not growing over the fit window");

  SingularTimeFit fit;
  fit.t_hat = -a / b;
  fit.window_size = static_cast<int>(m);
  double num = 0, den = 0;
  for (size_t i = first; i < q.size(); ++i) {
    const double y = 1.0 / q[i];
    const double e = y - (a + b * times[i]);
    num += e * e;
    den += y * y;
  }
  fit.residual = std::sqrt(num / den);
  fit.naive_lower_bound = times.back() + 1.0 / (8.0 * q_end);
  return fit;
}

inline SingularTimeFit estimate_singular_time(const FlowTrace& trace) {
  std::vector<double> q(trace.snapshots());
  for (int i = 0; i < trace.snapshots(); ++i) q[i] = trace.functionals[i].sup_rm;
  return estimate_singular_time(trace.times, q);
}

}  // namespace ricci
