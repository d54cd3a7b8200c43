#include "doctest.h"
#include "oracles.hpp"

#include "firetrack/geometry.hpp"
#include "firetrack/route_planning.hpp"

#include <numeric>
#include <random>
#include <set>

using namespace firetrack;

namespace {

bool is_permutation(const std::vector<int>& order, int n) {
  std::vector<int> sorted = order;
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> expect(static_cast<std::size_t>(n));
  std::iota(expect.begin(), expect.end(), 0);
  return sorted == expect;
}

std::vector<FirePoint> as_fires(const std::vector<Vector2d>& pts) {
  std::vector<FirePoint> out;
  for (std::size_t i = 0; i < pts.size(); ++i) out.push_back({static_cast<int>(i), pts[i]});
  return out;
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("smallest enclosing circle matches the brute-force oracle") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 12;
    const auto pts = oracle::random_points(rng, n);
    const Circle c = smallest_enclosing_circle(pts);
    const auto ref = oracle::brute_force_enclosing_circle(pts);
    CHECK(c.radius == doctest::Approx(ref.radius).epsilon(1e-9));
    for (const auto& p : pts) CHECK(c.contains(p, 1e-7));
  }
}

TEST_CASE("smallest enclosing circle degenerate inputs") {
  std::vector<Vector2d> none;
  CHECK(smallest_enclosing_circle(none).radius == 0.0);
  std::vector<Vector2d> same{{1, 1}, {1, 1}, {1, 1}};
  CHECK(smallest_enclosing_circle(same).radius == doctest::Approx(0.0));
  std::vector<Vector2d> line{{0, 0}, {1, 0}, {2, 0}, {3, 0}};
  const Circle c = smallest_enclosing_circle(line);
  CHECK(c.radius == doctest::Approx(1.5));
  CHECK(c.center.x() == doctest::Approx(1.5));
}

TEST_CASE("square footprint membership") {
  CHECK(in_square({1, 1}, {0, 0}, 2.0));
  CHECK_FALSE(in_square({1.01, 0}, {0, 0}, 2.0));
}

}  // TEST_SUITE

TEST_SUITE("route planning") {

TEST_CASE("spanning tree examples") {
  std::vector<Vector2d> one{{3, 4}};
  const auto t1 = build_mst(one);
  CHECK(t1.edges.empty());
  CHECK(t1.length == 0.0);
  std::vector<Vector2d> line{{0, 0}, {1, 0}, {2, 0}};
  CHECK(build_mst(line).length == doctest::Approx(2.0));
  const auto tour = tour_from_mst(line, build_mst(line));
  CHECK(tour.length == doctest::Approx(4.0));
  const auto single = tour_from_mst(one, t1);
  CHECK(single.order == std::vector<int>{0});
  CHECK(single.length == 0.0);
}

TEST_CASE("spanning tree equals the exhaustive minimum for small instances") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + trial % 7;  // 2..8
    const auto pts = oracle::random_points(rng, n);
    const auto mst = build_mst(pts);
    CHECK(mst.edges.size() == static_cast<std::size_t>(n - 1));
    CHECK(mst.length == doctest::Approx(oracle::exhaustive_mst(pts)).epsilon(1e-12));
  }
}

TEST_CASE("tree tour stays within twice the tree length") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 40;
    const auto pts = oracle::random_points(rng, n);
    const auto mst = build_mst(pts);
    const auto tour = tour_from_mst(pts, mst);
    CHECK(is_permutation(tour.order, n));
    CHECK(tour.order.front() == 0);
    CHECK(tour.length <= 2.0 * mst.length + 1e-9);
    CHECK(tour.length == doctest::Approx(cycle_length(tour.order, pts)).epsilon(1e-12));
  }
}

TEST_CASE("k-opt examples") {
  std::vector<Vector2d> square{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  Tour best{{0, 1, 2, 3}, 4.0};
  const auto same = k_opt_improve(best, square, 3);
  CHECK(same.order == best.order);
  CHECK(same.length == doctest::Approx(4.0));

  std::vector<Vector2d> crossed{{0, 0}, {1, 1}, {1, 0}, {0, 1}};
  Tour start{{0, 1, 2, 3}, 0.0};
  start.length = cycle_length(start.order, crossed);
  const auto fixed = k_opt_improve(start, crossed, 2);
  CHECK(fixed.length == doctest::Approx(4.0));
}

TEST_CASE("k-opt never lengthens, is idempotent, and stays near the optimum") {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 3 + trial % 7;  // 3..9
    const auto pts = oracle::random_points(rng, n);
    const auto initial = tour_from_mst(pts, build_mst(pts));
    const double optimum = oracle::exhaustive_tsp(pts);
    for (int k : {2, 3}) {
      const auto t = k_opt_improve(initial, pts, k);
      CHECK(is_permutation(t.order, n));
      CHECK(t.length <= initial.length + 1e-9);
      CHECK(t.length >= optimum - 1e-9);
      CHECK(t.length <= 2.0 * optimum + 1e-9);
      CHECK(t.length == doctest::Approx(cycle_length(t.order, pts)).epsilon(1e-12));
      const auto again = k_opt_improve(t, pts, k);
      CHECK(again.length == doctest::Approx(t.length).epsilon(1e-12));
    }
  }
}

TEST_CASE("3-opt is at least as good as 2-opt on random instances in aggregate") {
  std::mt19937_64 rng(12);
  double total2 = 0.0, total3 = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto pts = oracle::random_points(rng, 30);
    const auto initial = tour_from_mst(pts, build_mst(pts));
    total2 += k_opt_improve(initial, pts, 2).length;
    total3 += k_opt_improve(initial, pts, 3).length;
  }
  CHECK(total3 <= total2 + 1e-9);
}

TEST_CASE("Steiner reduction examples") {
  const double g = 20.0;
  std::vector<FirePoint> twin{{4, {5, 5}}, {9, {5, 5}}};
  auto w = steiner_reduce(twin, g);
  REQUIRE(w.size() == 1);
  CHECK(w[0].position.isApprox(Vector2d(5, 5)));
  CHECK(w[0].members == std::vector<int>{4, 9});

  std::vector<FirePoint> apart{{0, {0, 0}}, {1, {g + 0.1, 0}}};
  CHECK(steiner_reduce(apart, g).size() == 2);

  // three points spanning a diameter of g/2
  std::vector<FirePoint> cluster{{0, {0, 0}}, {1, {g / 2, 0}}, {2, {g / 4, g / 8}}};
  w = steiner_reduce(cluster, g);
  REQUIRE(w.size() == 1);
  std::vector<Vector2d> pts{cluster[0].q, cluster[1].q, cluster[2].q};
  const auto ref = oracle::brute_force_enclosing_circle(pts);
  CHECK((w[0].position - ref.center).norm() < 1e-9);
  CHECK(w[0].radius == doctest::Approx(ref.radius));
}

TEST_CASE("Steiner reduction covers every fire exactly once within g/2") {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 100; ++trial) {
    const auto pts = oracle::random_points(rng, 1 + trial % 30, 200.0);
    const auto fires = as_fires(pts);
    const double g = 10.0 + trial;
    const auto w = steiner_reduce(fires, g);
    CHECK(w.size() <= fires.size());
    std::multiset<int> seen;
    for (const auto& wp : w) {
      for (int id : wp.members) {
        seen.insert(id);
        CHECK((pts[id] - wp.position).norm() <= g / 2 + 1e-9);
      }
    }
    CHECK(seen.size() == fires.size());
    CHECK(std::set<int>(seen.begin(), seen.end()).size() == fires.size());
    CHECK(steiner_reduce(fires, 0.0).size() == std::set<std::pair<double, double>>([&] {
            std::set<std::pair<double, double>> s;
            for (const auto& p : pts) s.insert({p.x(), p.y()});
            return s;
          }()).size());
  }
}

TEST_CASE("path partition examples") {
  std::vector<Vector2d> two{{0, 0}, {5, 0}};
  Tour t2{{0, 1}, 10.0};
  const auto s2 = partition_path(t2, two, 2);
  REQUIRE(s2.size() == 2);
  CHECK(s2[0] == std::vector<int>{0});
  CHECK(s2[1] == std::vector<int>{1});
  CHECK_THROWS_AS(partition_path(t2, two, 3), InvalidSplit);
  CHECK_THROWS_AS(partition_path(t2, two, 0), InvalidSplit);

  std::vector<Vector2d> ring;
  for (int i = 0; i < 8; ++i) ring.emplace_back(std::cos(kTwoPi * i / 8), std::sin(kTwoPi * i / 8));
  Tour t8;
  t8.order.resize(8);
  std::iota(t8.order.begin(), t8.order.end(), 0);
  t8.length = cycle_length(t8.order, ring);
  const auto s8 = partition_path(t8, ring, 2);
  REQUIRE(s8.size() == 2);
  CHECK(s8[0].size() == 4);
  CHECK(s8[1].size() == 4);
}

TEST_CASE("path partition balance and coverage") {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 100; ++trial) {
    const auto pts = oracle::random_points(rng, 20);
    const auto tour = plan_tour(pts);
    double total = 0.0, longest = 0.0;
    for (std::size_t i = 0; i + 1 < tour.order.size(); ++i) {
      const double e = (pts[tour.order[i]] - pts[tour.order[i + 1]]).norm();
      total += e;
      longest = std::max(longest, e);
    }
    for (int parts : {2, 3, 5}) {
      const auto segs = partition_path(tour, pts, parts);
      REQUIRE(segs.size() == static_cast<std::size_t>(parts));
      std::vector<int> joined;
      for (const auto& s : segs) {
        CHECK_FALSE(s.empty());
        CHECK(path_length(s, pts) <= total / parts + longest + 1e-9);
        joined.insert(joined.end(), s.begin(), s.end());
      }
      CHECK(joined == tour.order);
    }
  }
}

}  // TEST_SUITE
