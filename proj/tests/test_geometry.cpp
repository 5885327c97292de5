#include <doctest.h>

#include <credal/error.hpp>
#include <credal/geometry.hpp>
#include <credal/lp.hpp>

#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>

using namespace credal;
using namespace credal::geometry;

namespace {

bool same_point_set(std::vector<Point> a, std::vector<Point> b, double tol = 1e-12) {
  if (a.size() != b.size()) return false;
  for (const auto& p : a) {
    bool found = false;
    for (const auto& q : b) {
      bool eq = p.size() == q.size();
      for (std::size_t j = 0; eq && j < p.size(); ++j) eq = std::abs(p[j] - q[j]) <= tol;
      found = found || eq;
    }
    if (!found) return false;
  }
  return true;
}

IntervalPotential random_feasible_box(std::size_t n, Rng& rng) {
  // Bracket a random distribution with random slack on both sides.
  const auto center = sample_simplex(n, rng);
  IntervalPotential box(n);
  for (std::size_t j = 0; j < n; ++j) {
    box[j].lower = std::max(0.0, center[j] - 0.3 * rng.uniform01());
    box[j].upper = std::min(1.0, center[j] + 0.3 * rng.uniform01());
  }
  return box;
}

}  // namespace

TEST_CASE("lp: small feasibility and optimization problems") {
  // x + y = 1, x - y = 0.5 -> x = 0.75, y = 0.25
  const lp::Matrix A{{1, 1}, {1, -1}};
  const std::vector<double> b{1, 0.5};
  const std::vector<double> c{1, 1};
  const auto r = lp::minimize(A, b, c);
  REQUIRE(r.status == lp::Status::kOptimal);
  CHECK(r.x[0] == doctest::Approx(0.75));
  CHECK(r.x[1] == doctest::Approx(0.25));
  // x + y = 1 with min -x over x, y >= 0 -> x = 1
  const auto r2 = lp::minimize({{1, 1}}, std::vector<double>{1}, std::vector<double>{-1, 0});
  REQUIRE(r2.status == lp::Status::kOptimal);
  CHECK(r2.objective == doctest::Approx(-1.0));
  // x - y = 1 with min -x is unbounded
  const auto r3 = lp::minimize({{1, -1}}, std::vector<double>{1}, std::vector<double>{-1, 0});
  CHECK(r3.status == lp::Status::kUnbounded);
  // x + y = -1 has no nonnegative solution
  CHECK_FALSE(lp::feasible({{1, 1}}, std::vector<double>{-1}));
}

TEST_CASE("prune_redundant") {
  SUBCASE("one dimension keeps the endpoints") {
    const std::vector<Point> pts{{0.1}, {0.5}, {0.9}};
    CHECK(prune_redundant(pts) == std::vector<Point>{{0.1}, {0.9}});
  }
  SUBCASE("duplicates collapse to one copy") {
    const std::vector<Point> pts{{0.3, 0.7}, {0.3, 0.7}, {0.3, 0.7 + 1e-14}};
    CHECK(prune_redundant(pts).size() == 1);
  }
  SUBCASE("square center is removed") {
    const std::vector<Point> pts{{0, 0}, {1, 0}, {0.5, 0.5}, {1, 1}, {0, 1}};
    CHECK(prune_redundant(pts) == std::vector<Point>{{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  }
  SUBCASE("point on an edge is removed") {
    const std::vector<Point> pts{{0, 0}, {0.5, 0}, {1, 0}, {0, 1}};
    CHECK(prune_redundant(pts).size() == 3);
  }
  SUBCASE("above the cap only duplicates are removed") {
    const std::vector<Point> pts{{0.1}, {0.5}, {0.9}, {0.5}};
    CHECK(prune_redundant(pts, 2).size() == 3);
  }
  SUBCASE("empty input") {
    CHECK_THROWS_AS(prune_redundant(std::vector<Point>{}), InvalidInput);
  }
}

TEST_CASE("prune_redundant matches the Caratheodory oracle and is idempotent") {
  Rng rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t dim = 2 + trial % 3;
    const std::size_t count = 3 + rng.below(8);
    std::vector<Point> pts;
    for (std::size_t i = 0; i < count; ++i) pts.push_back(sample_simplex(dim, rng));
    const auto pruned = prune_redundant(pts);
    CHECK(same_point_set(pruned, credal::testing::extreme_points(pts)));
    CHECK(prune_redundant(pruned) == pruned);
    CHECK(interval_projection(pruned) == interval_projection(pts));
  }
}

TEST_CASE("planar and simplex-chart hulls agree with the LP test") {
  Rng rng(12);
  for (int trial = 0; trial < 120; ++trial) {
    const std::size_t dim = 2 + trial % 4;
    const std::size_t count = 3 + rng.below(60);
    // Every point shares the coordinate sum 0.7, like a partial Minkowski sum.
    std::vector<Point> pts;
    for (std::size_t i = 0; i < count; ++i) {
      Point p = sample_simplex(dim, rng);
      for (auto& x : p) x *= 0.7;
      pts.push_back(p);
    }
    const auto pruned = prune_redundant(pts);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      std::vector<Point> others;
      for (std::size_t j = 0; j < pts.size(); ++j) {
        if (j != i) others.push_back(pts[j]);
      }
      const bool kept = std::find(pruned.begin(), pruned.end(), pts[i]) != pruned.end();
      CHECK(kept == !in_convex_hull(others, pts[i]));
    }
  }
  SUBCASE("Minkowski sums in three dimensions have coplanar facets") {
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<Point> sum{{0.0, 0.0, 0.0, 0.0}};
      for (int term = 0; term < 4; ++term) {
        std::vector<Point> grown;
        const Point a = sample_simplex(4, rng), b = sample_simplex(4, rng);
        for (const auto& p : sum) {
          for (const auto* q : {&a, &b}) {
            Point r = p;
            for (std::size_t d = 0; d < 4; ++d) r[d] += 0.25 * (*q)[d];
            grown.push_back(r);
          }
        }
        sum = grown;
      }
      const auto pruned = prune_redundant(sum);
      for (std::size_t i = 0; i < sum.size(); ++i) {
        std::vector<Point> others;
        for (std::size_t j = 0; j < sum.size(); ++j) {
          if (j != i) others.push_back(sum[j]);
        }
        const bool kept = std::find(pruned.begin(), pruned.end(), sum[i]) != pruned.end();
        CHECK(kept == !in_convex_hull(others, sum[i]));
      }
    }
  }
  SUBCASE("general position in three dimensions") {
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<Point> pts;
      const std::size_t count = 4 + rng.below(40);
      for (std::size_t i = 0; i < count; ++i) {
        pts.push_back({rng.uniform01(), rng.uniform01(), rng.uniform01()});
      }
      CHECK(same_point_set(prune_redundant(pts), credal::testing::extreme_points(pts)));
    }
  }
  SUBCASE("collinear planar points keep the two ends") {
    const std::vector<Point> pts{{0.5, 0.5}, {0, 0}, {1, 1}, {0.25, 0.25}};
    CHECK(prune_redundant(pts) == std::vector<Point>{{0, 0}, {1, 1}});
  }
}

TEST_CASE("interval_credal_vertices") {
  SUBCASE("binary case is forced by normalization") {
    const auto v = interval_credal_vertices({{0.2, 0.5}, {0.5, 0.8}});
    CHECK(same_point_set(v, {{0.2, 0.8}, {0.5, 0.5}}));
  }
  SUBCASE("full simplex") {
    const auto v = interval_credal_vertices({{0, 1}, {0, 1}, {0, 1}});
    CHECK(same_point_set(v, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}));
  }
  SUBCASE("ternary box, frozen from the permutation oracle") {
    const IntervalPotential box{{0.1, 0.5}, {0.2, 0.6}, {0.1, 0.4}};
    const std::vector<Point> expected{{0.1, 0.5, 0.4}, {0.1, 0.6, 0.3}, {0.3, 0.6, 0.1},
                                      {0.4, 0.2, 0.4}, {0.5, 0.2, 0.3}, {0.5, 0.4, 0.1}};
    CHECK(same_point_set(credal::testing::box_simplex_vertices_by_permutation(box), expected));
    CHECK(same_point_set(interval_credal_vertices(box), expected));
  }
  SUBCASE("degenerate intervals give one vertex") {
    CHECK(interval_credal_vertices({{0.3, 0.3}, {0.7, 0.7}}).size() == 1);
  }
  SUBCASE("infeasible intervals") {
    CHECK_THROWS_AS(interval_credal_vertices({{0.6, 0.7}, {0.6, 0.7}}), Infeasible);
    CHECK_THROWS_AS(interval_credal_vertices({{0.1, 0.2}, {0.1, 0.2}}), Infeasible);
  }
}

TEST_CASE("interval_credal_vertices agrees with the permutation oracle on random boxes") {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + trial % 5;
    const auto box = random_feasible_box(n, rng);
    const auto verts = interval_credal_vertices(box);
    CHECK(same_point_set(verts, credal::testing::box_simplex_vertices_by_permutation(box), 1e-9));
    for (const auto& v : verts) {
      std::size_t interior = 0;
      double sum = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        sum += v[j];
        if (v[j] > box[j].lower + 1e-12 && v[j] < box[j].upper - 1e-12) ++interior;
      }
      CHECK(interior <= 1);
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
    // Every vertex is a true vertex.
    if (verts.size() <= 40) CHECK(prune_redundant(verts).size() == verts.size());
  }
}

TEST_CASE("constrained_extreme_mass") {
  SUBCASE("frozen example checked against vertex enumeration") {
    const IntervalPotential bounds{{0.3, 0.8}, {0.3, 0.8}};
    const std::vector<double> coeffs{0.1, 0.9};
    double oracle = INFINITY;
    for (const auto& v : credal::testing::box_simplex_vertices_by_permutation(bounds)) {
      oracle = std::min(oracle, coeffs[0] * v[0] + coeffs[1] * v[1]);
    }
    CHECK(oracle == doctest::Approx(0.34));
    const auto r = constrained_extreme_mass(coeffs, bounds, Direction::Minimize);
    CHECK(r.assignment[0] == doctest::Approx(0.7));
    CHECK(r.assignment[1] == doctest::Approx(0.3));
    CHECK(r.objective == doctest::Approx(0.34).epsilon(1e-14));
  }
  SUBCASE("constant coefficients") {
    const std::vector<double> coeffs{0.25, 0.25, 0.25};
    const auto r = constrained_extreme_mass(coeffs, {{0.1, 0.5}, {0.2, 0.6}, {0.1, 0.4}},
                                            Direction::Maximize);
    CHECK(r.objective == doctest::Approx(0.25));
  }
  SUBCASE("unit box, minimize") {
    const std::vector<double> coeffs{0.0, 1.0};
    const auto r = constrained_extreme_mass(coeffs, {{0, 1}, {0, 1}}, Direction::Minimize);
    CHECK(r.assignment == std::vector<double>{1.0, 0.0});
    CHECK(r.objective == 0.0);
  }
  SUBCASE("infeasible bounds") {
    const std::vector<double> coeffs{0.0, 1.0};
    CHECK_THROWS_AS(constrained_extreme_mass(coeffs, {{0.6, 1}, {0.6, 1}}, Direction::Minimize),
                    Infeasible);
  }
}

TEST_CASE("constrained_extreme_mass equals the vertex-enumeration optimum") {
  Rng rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + trial % 5;
    const auto box = random_feasible_box(n, rng);
    std::vector<double> coeffs(n);
    // Repeated coefficients exercise tie-breaking.
    for (auto& c : coeffs) c = static_cast<double>(rng.below(4)) / 3.0;
    double lo = INFINITY, hi = -INFINITY;
    for (const auto& v : credal::testing::box_simplex_vertices_by_permutation(box)) {
      double e = 0.0;
      for (std::size_t j = 0; j < n; ++j) e += coeffs[j] * v[j];
      lo = std::min(lo, e);
      hi = std::max(hi, e);
    }
    const auto rmin = constrained_extreme_mass(coeffs, box, Direction::Minimize);
    const auto rmax = constrained_extreme_mass(coeffs, box, Direction::Maximize);
    CHECK(std::abs(rmin.objective - lo) <= 1e-9);
    CHECK(std::abs(rmax.objective - hi) <= 1e-9);
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      CHECK(rmin.assignment[j] >= box[j].lower - 1e-15);
      CHECK(rmin.assignment[j] <= box[j].upper + 1e-15);
      s += rmin.assignment[j];
    }
    CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("sample_simplex") {
  Rng rng(2024);
  CHECK(sample_simplex(1, rng) == Distribution{1.0});
  CHECK_THROWS_AS(sample_simplex(0, rng), InvalidInput);
  std::vector<double> mean(3, 0.0);
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    const auto p = sample_simplex(3, rng);
    double s = 0.0;
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK_UNARY(p[j] >= 0.0);
      s += p[j];
      mean[j] += p[j] / draws;
    }
    CHECK(std::abs(s - 1.0) <= 1e-12);
  }
  for (double m : mean) CHECK(std::abs(m - 1.0 / 3.0) < 0.01);
}
