#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "ricci/metric_space.hpp"

using namespace ricci;

namespace {

FiniteMetricSpace line_space(std::vector<double> xs) {
  FiniteMetricSpace X;
  const int n = static_cast<int>(xs.size());
  X.dist.assign(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) {
    X.labels.push_back("x" + std::to_string(i));
    for (int j = 0; j < n; ++j) X.dist[i][j] = std::abs(xs[i] - xs[j]);
  }
  return X;
}

FiniteMetricSpace random_space(std::mt19937& rng, int n) {
  // random points on a line segment keep the triangle inequality exact
  std::uniform_real_distribution<double> u(0.0, 2.0);
  std::vector<double> xs(n);
  for (auto& v : xs) v = u(rng);
  return line_space(xs);
}

}  // namespace

TEST_CASE("sample_ball: degenerate single point") {
  auto p = testhelp::round_sphere(100, 1.0);
  auto X = sample_ball(p, {0.5, 0.0}, 0.5, 1);
  REQUIRE(X.size() == 1);
  CHECK(X.dist[0][0] == 0.0);
}

TEST_CASE("sample_ball: whole-sphere sample respects the diameter") {
  auto p = testhelp::round_sphere(200, 1.0);
  auto X = sample_ball(p, {0.5, 0.0}, M_PI, 20);
  require_valid(X, 1e-6 + 6e-3);
  CHECK(diameter(X) <= M_PI + 1e-3);
  SECTION("determinism") {
    auto Y = sample_ball(p, {0.5, 0.0}, M_PI, 20);
    REQUIRE(Y.size() == X.size());
    for (int i = 0; i < X.size(); ++i)
      for (int j = 0; j < X.size(); ++j) CHECK(X.dist[i][j] == Y.dist[i][j]);
  }
}

TEST_CASE("gh_upper_bound on hand-checked instances") {
  SECTION("identity correspondence on identical spaces") {
    auto X = line_space({0.0, 0.5, 1.0});
    Correspondence id{{{0, 0}, {1, 1}, {2, 2}}};
    CHECK(gh_upper_bound(X, X, id) == 0.0);
  }
  SECTION("three-to-two line collapse gives 1/4") {
    auto X = line_space({0.0, 0.5, 1.0});
    auto Y = line_space({0.0, 1.0});
    Correspondence corr{{{0, 0}, {1, 0}, {2, 1}}};
    CHECK(gh_upper_bound(X, Y, corr) == Catch::Approx(0.25));
  }
  SECTION("scaled space distortion is (c-1) diam / 2") {
    auto X = line_space({0.0, 0.4, 1.0});
    auto Y = line_space({0.0, 1.2, 3.0});  // c = 3
    Correspondence id{{{0, 0}, {1, 1}, {2, 2}}};
    CHECK(gh_upper_bound(X, Y, id) == Catch::Approx(0.5 * 2.0 * 1.0));
  }
  SECTION("invalid correspondence rejected") {
    auto X = line_space({0.0, 1.0});
    Correspondence bad{{{0, 0}}};
    CHECK_THROWS_AS(gh_upper_bound(X, X, bad), InvalidInput);
  }
}

TEST_CASE("gh_brute_force on closed-form instances") {
  SECTION("line 3-point vs 2-point equals 1/4") {
    auto X = line_space({0.0, 0.5, 1.0});
    auto Y = line_space({0.0, 1.0});
    CHECK(gh_brute_force(X, Y) == Catch::Approx(0.25));
    CHECK(gh_brute_force(Y, X) == Catch::Approx(0.25));
  }
  SECTION("two-point spaces with gaps a, b give |a-b|/2") {
    auto X = line_space({0.0, 0.8});
    auto Y = line_space({0.0, 0.3});
    CHECK(gh_brute_force(X, Y) == Catch::Approx(0.25));
  }
  SECTION("oversized spaces refused") {
    auto X = line_space({0, 0.1, 0.2, 0.3, 0.4, 0.5});
    CHECK_THROWS_AS(gh_brute_force(X, X), InvalidInput);
  }
}

TEST_CASE("gh properties on random small spaces") {
  std::mt19937 rng(2024);
  std::uniform_int_distribution<int> size_of(2, 5);
  for (int trial = 0; trial < 40; ++trial) {
    auto X = random_space(rng, size_of(rng));
    auto Y = random_space(rng, size_of(rng));
    const double dxy = gh_brute_force(X, Y);
    CHECK(gh_brute_force(X, X) == 0.0);
    CHECK(gh_brute_force(Y, X) == Catch::Approx(dxy).margin(1e-12));
    // any covering correspondence upper-bounds the exact value
    Correspondence corr;
    for (int i = 0; i < X.size(); ++i) corr.relation.push_back({i, i % Y.size()});
    for (int j = 0; j < Y.size(); ++j) corr.relation.push_back({j % X.size(), j});
    CHECK(gh_upper_bound(X, Y, corr) >= dxy - 1e-12);
  }
}

TEST_CASE("approximation-map conditions") {
  auto X = line_space({0.0, 0.5, 1.0});
  SECTION("identity is an eps-approximation for every eps") {
    for (double eps : {0.05, 0.3, 2.0}) {
      auto rep = check_eps_approx({0, 1, 2}, X, X, eps);
      CHECK(rep.ok);
    }
  }
  SECTION("collapsing map fails the distortion condition") {
    auto Y = line_space({0.0, 1.0});
    auto rep = check_eps_approx({0, 0, 0}, X, Y, 0.1);
    CHECK_FALSE(rep.ok);
    CHECK_FALSE(rep.distortion_ok);
  }
}

TEST_CASE("factor-10 relations between gh distance and approximations") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> size_of(2, 4);
  int checked = 0;
  for (int trial = 0; trial < 30; ++trial) {
    auto X = random_space(rng, size_of(rng));
    auto Y = random_space(rng, size_of(rng));
    X.base = 0;
    Y.base = 0;
    const double d = gh_brute_force(X, Y);

    // sweep all maps X -> Y for the smallest eps accepted
    const int nx = X.size(), ny = Y.size();
    std::vector<int> map(nx, 0);
    double best_eps = std::numeric_limits<double>::infinity();
    std::vector<int> best_map;
    while (true) {
      // bisection on eps for this map (conditions are monotone in eps)
      double lo = 1e-6, hi = 100.0;
      if (check_eps_approx(map, X, Y, hi).ok) {
        for (int it = 0; it < 60; ++it) {
          const double mid = 0.5 * (lo + hi);
          if (check_eps_approx(map, X, Y, mid).ok) hi = mid; else lo = mid;
        }
        if (hi < best_eps) {
          best_eps = hi;
          best_map = map;
        }
      }
      int k = 0;
      while (k < nx && ++map[k] == ny) map[k++] = 0;
      if (k == nx) break;
    }
    REQUIRE(std::isfinite(best_eps));
    // existence of an eps-approximation bounds the distance by 10 eps
    CHECK(d < 10.0 * best_eps + 1e-9);
    // and the best enumerated map is a (10 d)-approximation when d > 0
    if (d > 1e-9) {
      auto rep = check_eps_approx(best_map, X, Y, 10.0 * d + 1e-9);
      CHECK(rep.ok);
    }
    ++checked;
  }
  CHECK(checked == 30);
}

TEST_CASE("distortion ledger on the sphere run") {
  auto trace = run(testhelp::sphere_scenario(200, 1.0, 100.0));
  std::vector<Scenario::PointPair> pairs{
      {0.0, 0.0, 1.0, 0.0},   // poles
      {0.3, 0.0, 0.7, 1.2},   // generic pair
  };
  auto rep = distortion_ledger(trace, pairs, 24);
  CHECK(rep.all_pass);
  for (const auto& row : rep.rows) CHECK(row.pass);

  SECTION("pole pair over [0, 3/16]: log ratio ln 2 and integral (sqrt3/2) ln 4") {
    // locate the snapshot nearest to t = 3/16
    int kb = 0;
    for (int i = 0; i < trace.snapshots(); ++i)
      if (std::abs(trace.times[i] - 3.0 / 16.0) <
          std::abs(trace.times[kb] - 3.0 / 16.0))
        kb = i;
    const double d0 = geodesic_distance(trace.profiles.front(), {0, 0}, {1, 0});
    const double d1 = geodesic_distance(trace.profiles[kb], {0, 0}, {1, 0});
    const double lr = std::abs(std::log(d1 / d0));
    CHECK(lr == Catch::Approx(std::log(2.0)).epsilon(0.02));
    auto s = sup_norms(trace);
    const double ip = ricci::detail::integrate_window(s.t, s.sup_ric, 0.0, trace.times[kb]);
    CHECK(ip == Catch::Approx(0.5 * std::sqrt(3.0) * std::log(4.0)).epsilon(0.02));
    CHECK(ip - lr == Catch::Approx(0.507).epsilon(0.05));
  }
}

TEST_CASE("distortion ledger on a static trace is exactly balanced") {
  FlowTrace tr;
  tr.scenario = testhelp::sphere_scenario(100, 1.0, 100.0);
  auto p = initial_profile(tr.scenario);
  auto c = curvature(p);
  for (int k = 0; k < 3; ++k) {
    auto pk = p;
    pk.time = 0.05 * k;
    tr.times.push_back(pk.time);
    tr.profiles.push_back(pk);
    tr.curvatures.push_back(c);
    tr.functionals.push_back(ricci::detail::snapshot_functionals(pk, c));
  }
  auto rep = distortion_ledger(tr, {{0.25, 0.0, 0.75, 0.0}}, 2);
  for (const auto& row : rep.rows) {
    CHECK(row.log_ratio == 0.0);
    CHECK(row.pass);
  }
}

TEST_CASE("flow samples at two times: identity map approximation bound") {
  // Lemma-style scenario: the same ball sampled under g(0) and g(t1), with
  // xi = int P dt small; the identity map must be a 2(1 - e^-xi)-approximation.
  auto trace = run(testhelp::sphere_scenario(200, 1.0, 100.0));
  auto s = sup_norms(trace);
  // choose t1 so that xi ~ 0.12 and diameters stay below 2
  int k1 = 0;
  while (k1 < trace.snapshots() - 1 &&
         ricci::detail::integrate_window(s.t, s.sup_ric, 0.0, trace.times[k1]) < 0.12)
    ++k1;
  const double xi = ricci::detail::integrate_window(s.t, s.sup_ric, 0.0, trace.times[k1]);

  auto X = sample_ball(trace.profiles.front(), {0.5, 0.0}, 0.9, 8);
  FiniteMetricSpace Y = X;
  {
    const auto& pt = trace.profiles[k1];
    const auto c = geo::make_context(pt);
    for (int i = 0; i < Y.size(); ++i)
      for (int j = i + 1; j < Y.size(); ++j) {
        const double d = geo::distance(c, c.s_of_x(X.coords[i].x), c.s_of_x(X.coords[j].x),
                                       X.coords[j].angle - X.coords[i].angle, {})
                             .length;
        Y.dist[i][j] = d;
        Y.dist[j][i] = d;
      }
  }
  REQUIRE(diameter(X) < 2.0);
  REQUIRE(diameter(Y) < 2.0);
  // distances contract by at most e^{-xi}; check the pairwise log ratios
  for (int i = 0; i < X.size(); ++i)
    for (int j = i + 1; j < X.size(); ++j)
      CHECK(std::abs(std::log(Y.d(i, j) / X.d(i, j))) <= xi + 5e-3);

  std::vector<int> id(X.size());
  for (int i = 0; i < X.size(); ++i) id[i] = i;
  const double eps = 2.0 * (1.0 - std::exp(-xi)) + 5e-3;
  auto rep = check_eps_approx(id, X, Y, eps);
  CHECK(rep.ok);
}
