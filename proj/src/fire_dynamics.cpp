#include "firetrack/fire_dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace firetrack {

double spread_rate_for_speed(double speed, double U, const EllipseParams<double>& p) {
  if (speed == 0.0) return 0.0;
  const double factor = spread_factor(U, p);
  if (factor <= 0.0) {
    throw DomainError("zero spread factor at wind speed " + std::to_string(U) +
                      "; a nonzero fire speed needs LB(U) > 1");
  }
  return speed / factor;
}

FireFront propagate_front(const FireFront& front, const WindFuelState& wf,
                          const EllipseParams<double>& params, double dt, double sigma_w, Rng& rng) {
  FireFront out = front;
  out.q = front.q + front.qdot * dt;
  if (sigma_w > 0.0) {
    std::normal_distribution<double> noise(0.0, sigma_w);
    out.q.x() += noise(rng);
    out.q.y() += noise(rng);
  }
  out.qdot = front_velocity(wf, params);
  return out;
}

std::vector<FireFront> spawn_fronts(const FireFront& front, const WindFuelState& wf,
                                    const EllipseParams<double>& params, int spawn_rate_max,
                                    double dt, int born_at, int& next_id, Rng& rng) {
  std::vector<FireFront> children;
  if (spawn_rate_max <= 0) return children;
  std::uniform_int_distribution<int> count(0, spawn_rate_max);
  const int k = count(rng);
  const Vector2d half_box = (front.qdot * dt).cwiseAbs();
  const Vector2d velocity = front_velocity(wf, params);
  children.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    FireFront child;
    child.id = next_id++;
    Vector2d offset = Vector2d::Zero();
    for (int axis = 0; axis < 2; ++axis) {
      if (half_box[axis] > 0.0) {
        std::uniform_real_distribution<double> u(-half_box[axis], half_box[axis]);
        offset[axis] = u(rng);
      }
    }
    child.q = front.q + offset;
    child.qdot = velocity;
    child.born_at = born_at;
    children.push_back(child);
  }
  return children;
}

namespace {

WindFuelState wind_fuel_at(const FireMap& map, int step) {
  WindFuelState wf = map.wind_fuel;
  for (const auto& change : map.schedule) {
    if (change.step <= step) wf = change.wind_fuel;
  }
  return wf;
}

constexpr std::uint64_t kSpawnStream = 0x5350574EULL;

}  // namespace

FireMap simulate_step(const FireMap& map, const EllipseParams<double>& params, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("simulate_step: dt must be positive");
  FireMap out = map;
  out.step = map.step + 1;
  out.wind_fuel = wind_fuel_at(map, out.step);

  for (auto& front : out.fronts) {
    Rng rng = substream(map.rng_seed, static_cast<std::uint64_t>(front.id), static_cast<std::uint64_t>(out.step));
    front = propagate_front(front, out.wind_fuel, params, dt, map.process_noise, rng);
  }

  const bool spawning = map.fire_case == FireCase::MovingSpreading && map.spawn_rate_max > 0 &&
                        map.spawn_interval > 0 && out.step % map.spawn_interval == 0;
  if (spawning) {
    const std::size_t parents = out.fronts.size();
    for (std::size_t i = 0; i < parents; ++i) {
      if (static_cast<int>(out.fronts.size()) >= map.max_fronts) break;
      Rng rng = substream(map.rng_seed ^ kSpawnStream, static_cast<std::uint64_t>(out.fronts[i].id),
                          static_cast<std::uint64_t>(out.step));
      auto children = spawn_fronts(out.fronts[i], out.wind_fuel, params, map.spawn_rate_max,
                                   dt * map.spawn_interval, out.step, out.next_id, rng);
      const auto room = static_cast<std::size_t>(map.max_fronts) - out.fronts.size();
      if (children.size() > room) children.resize(room);
      out.fronts.insert(out.fronts.end(), children.begin(), children.end());
    }
  }
  return out;
}

}  // namespace firetrack
