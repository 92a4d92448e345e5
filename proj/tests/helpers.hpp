#pragma once

// Shared fixtures and independent oracles for the test suites.  Oracles here
// are deliberately written from closed forms or generic quadrature, not by
// calling the library code they check.

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "ricci/curvature.hpp"
#include "ricci/flow.hpp"
#include "ricci/profile.hpp"

namespace testhelp {

inline ricci::WarpedProfile round_sphere(int n_cells, double radius, int dim = 3) {
  ricci::Scenario sc;
  sc.dim = dim;
  sc.family = ricci::ProfileFamily::round_sphere;
  sc.radius = radius;
  sc.grid_n = n_cells;
  return ricci::initial_profile(sc);
}

inline ricci::Scenario sphere_scenario(int n_cells, double radius, double stop_ratio,
                                       int stride = 10) {
  ricci::Scenario sc;
  sc.family = ricci::ProfileFamily::round_sphere;
  sc.radius = radius;
  sc.grid_n = n_cells;
  sc.stop_q_ratio = stop_ratio;
  sc.output_stride = stride;
  sc.name = "sphere";
  return sc;
}

inline ricci::Scenario dumbbell_scenario(int n_cells, double neck, double bump,
                                         double stop_ratio, int stride = 2) {
  ricci::Scenario sc;
  sc.family = ricci::ProfileFamily::dumbbell;
  sc.neck = neck;
  sc.bump = bump;
  sc.grid_n = n_cells;
  sc.stop_q_ratio = stop_ratio;
  sc.output_stride = stride;
  sc.name = "dumbbell";
  return sc;
}

/// Exact shrinking-sphere solution: radius r(t) = sqrt(r0^2 - 2(n-1) t).
inline double sphere_radius_at(double r0, int dim, double t) {
  return std::sqrt(r0 * r0 - 2.0 * (dim - 1) * t);
}

/// Generic composite-Simpson quadrature, used as an independent oracle.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  if (n % 2 == 1) ++n;
  const double h = (b - a) / n;
  double acc = f(a) + f(b);
  for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

/// Smooth valid profile with slope-1 poles, randomized by amplitude within
/// the |dpsi/ds| <= 1 family; used for property tests.
inline ricci::WarpedProfile perturbed_sphere(int n_cells, double a, double b, int dim = 3) {
  ricci::WarpedProfile p;
  p.dim = dim;
  p.grid = ricci::make_uniform_grid(n_cells);
  p.phi.resize(n_cells + 1);
  p.psi.resize(n_cells + 1);
  for (int i = 0; i <= n_cells; ++i) {
    const double x = p.grid.x[i];
    const double sx = std::sin(M_PI * x);
    p.phi[i] = M_PI * (1.0 + b * sx);
    p.psi[i] = sx * (1.0 + a * sx * sx);
  }
  p.psi[0] = 0.0;
  p.psi[n_cells] = 0.0;
  return p;
}

/// Parabolic rescaling g -> c^2 g, t -> c^2 t applied to a trace; curvatures
/// are recomputed from the rescaled profiles rather than scaled in place.
inline ricci::FlowTrace rescale_trace(const ricci::FlowTrace& in, double c) {
  ricci::FlowTrace out;
  out.scenario = in.scenario;
  out.status = in.status;
  out.steps_taken = in.steps_taken;
  for (int k = 0; k < in.snapshots(); ++k) {
    ricci::WarpedProfile p = in.profiles[k];
    for (auto& v : p.phi) v *= c;
    for (auto& v : p.psi) v *= c;
    for (auto& v : p.cell_s) v *= c;
    p.time = in.times[k] * c * c;
    out.times.push_back(p.time);
    auto curv = ricci::curvature(p);
    out.functionals.push_back(ricci::detail::snapshot_functionals(p, curv));
    out.profiles.push_back(std::move(p));
    out.curvatures.push_back(std::move(curv));
  }
  return out;
}

}  // namespace testhelp
