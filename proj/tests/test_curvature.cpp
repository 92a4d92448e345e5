#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "helpers.hpp"
#include "ricci/curvature.hpp"

using namespace ricci;

TEST_CASE("round S^3 of radius 1: all curvature scalars") {
  auto p = testhelp::round_sphere(200, 1.0);
  auto c = curvature(p);
  const double sqrt12 = std::sqrt(12.0);
  for (int i = 0; i < c.nodes(); ++i) {
    CHECK(c.k_rad[i] == Catch::Approx(1.0).margin(2e-4));
    CHECK(c.k_sph[i] == Catch::Approx(1.0).margin(2e-4));
    CHECK(c.scalar[i] == Catch::Approx(6.0).margin(1.5e-3));
    CHECK(c.norm_ric[i] == Catch::Approx(2.0 * std::sqrt(3.0)).margin(1e-3));
    CHECK(c.norm_rm[i] == Catch::Approx(sqrt12).margin(1e-3));
    CHECK(c.norm_ric_minus[i] == Catch::Approx(0.0).margin(1e-9));
  }
}

TEST_CASE("round S^4 of radius 2") {
  auto p = testhelp::round_sphere(200, 2.0, 4);
  auto c = curvature(p);
  for (int i = 0; i < c.nodes(); ++i) {
    CHECK(c.scalar[i] == Catch::Approx(3.0).margin(1e-3));
    CHECK(c.norm_rm[i] == Catch::Approx(std::sqrt(24.0) / 4.0).margin(1e-3));
  }
}

TEST_CASE("cylinder segment: product-metric curvature at interior nodes") {
  // Synthetic profile, not pole-closed; only interior nodes are meaningful.
  const double r = 0.7;
  WarpedProfile p;
  p.dim = 3;
  p.grid = make_uniform_grid(64);
  p.phi.assign(65, 1.0);
  p.psi.assign(65, r);
  auto c = curvature(p);
  for (int i = 5; i < 60; ++i) {
    CHECK(c.k_rad[i] == Catch::Approx(0.0).margin(1e-12));
    CHECK(c.k_sph[i] == Catch::Approx(1.0 / (r * r)).margin(1e-12));
    CHECK(c.ric_rad[i] == Catch::Approx(0.0).margin(1e-12));
    CHECK(c.ric_sph[i] == Catch::Approx(1.0 / (r * r)).margin(1e-12));
    CHECK(c.scalar[i] == Catch::Approx(2.0 / (r * r)).margin(1e-11));
  }
}

TEST_CASE("trace identity R = ric_rad + (n-1) ric_sph holds to roundoff") {
  for (double a : {-0.25, 0.0, 0.1}) {
    auto p = testhelp::perturbed_sphere(150, a, 0.1);
    REQUIRE(check_profile(p).ok);
    auto c = curvature(p);
    for (int i = 0; i < c.nodes(); ++i) {
      const double rhs = c.ric_rad[i] + (p.dim - 1) * c.ric_sph[i];
      CHECK(c.scalar[i] == Catch::Approx(rhs).margin(1e-12 * (1.0 + std::abs(rhs))));
    }
  }
}

TEST_CASE("eigenvalue inequalities hold pointwise") {
  auto p = testhelp::perturbed_sphere(150, -0.25, 0.05);
  auto c = curvature(p);
  const double n = p.dim;
  for (int i = 0; i < c.nodes(); ++i) {
    CHECK(c.scalar[i] * c.scalar[i] <= n * c.norm_ric[i] * c.norm_ric[i] * (1.0 + 1e-12));
    CHECK(c.norm_ric_minus[i] <= c.norm_ric[i] * (1.0 + 1e-12));
  }
}

TEST_CASE("curvature scales exactly by 1/c^2 under psi,phi -> c psi, c phi") {
  auto p = testhelp::perturbed_sphere(120, 0.1, 0.05);
  auto c1 = curvature(p);
  auto q = p;
  for (auto& v : q.phi) v *= 2.0;
  for (auto& v : q.psi) v *= 2.0;
  auto c2 = curvature(q);
  for (int i = 0; i < c1.nodes(); ++i) {
    // c = 2 is a power of two, so the scaling is exact in floating point.
    CHECK(c2.k_rad[i] == c1.k_rad[i] / 4.0);
    CHECK(c2.k_sph[i] == c1.k_sph[i] / 4.0);
    CHECK(c2.scalar[i] == Catch::Approx(c1.scalar[i] / 4.0).margin(1e-15 * std::abs(c1.scalar[i])));
    CHECK(c2.norm_rm[i] == Catch::Approx(c1.norm_rm[i] / 4.0).epsilon(1e-15));
    CHECK(c2.norm_ric[i] == Catch::Approx(c1.norm_ric[i] / 4.0).epsilon(1e-15));
  }
}

TEST_CASE("grid refinement: sphere curvature converges at order >= 1.9") {
  auto max_err = [](int n_cells) {
    auto p = testhelp::round_sphere(n_cells, 1.0);
    auto c = curvature(p);
    double e = 0.0;
    for (int i = 0; i < c.nodes(); ++i) e = std::max(e, std::abs(c.norm_rm[i] - std::sqrt(12.0)));
    return e;
  };
  const double e100 = max_err(100);
  const double e200 = max_err(200);
  const double e400 = max_err(400);
  const double order1 = std::log2(e100 / e200);
  const double order2 = std::log2(e200 / e400);
  CHECK(order1 >= 1.9);
  CHECK(order2 >= 1.9);
}

TEST_CASE("closed-form helpers match hand values") {
  auto s3 = round_sphere_curvature(3, 1.0);
  CHECK(s3.scalar == Catch::Approx(6.0));
  CHECK(s3.norm_ric == Catch::Approx(2.0 * std::sqrt(3.0)));
  CHECK(s3.norm_rm == Catch::Approx(std::sqrt(12.0)));
  auto cyl = cylinder_curvature(3, 1.0);
  CHECK(cyl.scalar == Catch::Approx(2.0));
  CHECK(cyl.norm_ric == Catch::Approx(std::sqrt(2.0)));
  CHECK(cyl.norm_rm == Catch::Approx(2.0));
}
