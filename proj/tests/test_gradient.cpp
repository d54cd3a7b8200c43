#include "doctest.h"

#include "firetrack/gradient_baseline.hpp"

#include <random>

using namespace firetrack;

namespace {

UavAgent drone(int id, const Vector2d& at) {
  UavAgent a;
  a.id = id;
  a.pose = Vector3d(at.x(), at.y(), 50.0);
  return a;
}

}  // namespace

TEST_SUITE("gradient baseline") {

TEST_CASE("fire directly below gives no motion") {
  std::vector<UavAgent> one{drone(0, {10, 10})};
  std::vector<Vector2d> fire{{10, 10}};
  const auto out = gradient_coverage_step(one, fire, GradientConfig{}, 1.0);
  CHECK(out[0].planar() == Vector2d(10, 10));
}

TEST_CASE("fire to the east gives strictly eastward motion") {
  std::vector<UavAgent> one{drone(0, {0, 0})};
  std::vector<Vector2d> fire{{20, 0}};
  const auto out = gradient_coverage_step(one, fire, GradientConfig{}, 1.0);
  CHECK(out[0].planar().x() > 0.0);
  CHECK(out[0].planar().y() == 0.0);
}

TEST_CASE("coincident UAVs separate") {
  std::vector<UavAgent> pair{drone(0, {5, 5}), drone(1, {5, 5})};
  std::vector<Vector2d> none;
  double prev = 0.0;
  for (int step = 0; step < 2; ++step) {
    pair = gradient_coverage_step(pair, none, GradientConfig{}, 1.0);
    const double d = (pair[0].planar() - pair[1].planar()).norm();
    CHECK(d > prev);
    prev = d;
  }
}

TEST_CASE("step length and altitude band") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 200.0);
  GradientConfig cfg;
  cfg.step_size = 5.0;
  cfg.separation_weight = 3.0;
  cfg.min_altitude = 40.0;
  cfg.max_altitude = 45.0;
  std::vector<UavAgent> fleet;
  for (int i = 0; i < 6; ++i) fleet.push_back(drone(i, {u(rng), u(rng)}));
  std::vector<Vector2d> fires;
  for (int i = 0; i < 30; ++i) fires.emplace_back(u(rng), u(rng));
  for (int step = 0; step < 50; ++step) {
    const auto next = gradient_coverage_step(fleet, fires, cfg, 0.5);
    for (std::size_t i = 0; i < fleet.size(); ++i) {
      CHECK((next[i].planar() - fleet[i].planar()).norm() <= fleet[i].speed * 0.5 + 1e-12);
      CHECK(next[i].pose.z() >= 40.0);
      CHECK(next[i].pose.z() <= 45.0);
    }
    fleet = next;
  }
}

TEST_CASE("single UAV converges onto a single fire without separation") {
  GradientConfig cfg;
  cfg.separation_weight = 0.0;
  std::vector<UavAgent> one{drone(0, {0, 0})};
  const Vector2d fire(60, -40);
  std::vector<Vector2d> fires{fire};
  for (int step = 0; step < 200; ++step) one = gradient_coverage_step(one, fires, cfg, 1.0);
  CHECK((one[0].planar() - fire).norm() < 1.0);
}

TEST_CASE("gradient step is deterministic") {
  std::vector<UavAgent> a{drone(0, {0, 0}), drone(1, {30, 0})};
  std::vector<Vector2d> fires{{10, 10}, {40, 5}};
  auto b = a;
  for (int step = 0; step < 20; ++step) {
    a = gradient_coverage_step(a, fires, GradientConfig{}, 1.0);
    b = gradient_coverage_step(b, fires, GradientConfig{}, 1.0);
  }
  CHECK(a[0].pose == b[0].pose);
  CHECK(a[1].pose == b[1].pose);
}

}  // TEST_SUITE
