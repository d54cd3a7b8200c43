#pragma once

#include "firetrack/common.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

namespace firetrack {

/// Constants of the length-to-breadth model LB(U) = a e^{bU} + c e^{-dU} + l.
template <typename Scalar>
struct EllipseParams {
  Scalar a = Scalar(0.936);
  Scalar b = Scalar(0.2566);
  Scalar c = Scalar(0.461);
  Scalar d = Scalar(0.1548);
  Scalar l = Scalar(-0.397);
};

inline constexpr double kLengthToBreadthTolerance = 1e-9;
// Floor applied to sqrt(GB) inside dC/dU, which is singular where LB(U) = 1.
inline constexpr double kSqrtGbFloor = 1e-9;

struct WindFuelState {
  double R = 0.0;      // spread rate (m/s)
  double U = 0.0;      // wind speed (m/s)
  double theta = 0.0;  // wind azimuth (rad), clockwise from +y
};

template <typename Scalar>
Scalar length_to_breadth(Scalar U, const EllipseParams<Scalar>& p) {
  using std::exp;
  return p.a * exp(p.b * U) + p.c * exp(-p.d * U) + p.l;
}

template <typename Scalar>
Scalar length_to_breadth_derivative(Scalar U, const EllipseParams<Scalar>& p) {
  using std::exp;
  return p.a * p.b * exp(p.b * U) - p.c * p.d * exp(-p.d * U);
}

/// Fraction of R that becomes planar front speed: sqrt(GB) / (LB + sqrt(GB)),
/// which equals 1 - LB / (LB + sqrt(GB)). Throws DomainError if LB(U) < 1.
template <typename Scalar>
Scalar spread_factor(Scalar U, const EllipseParams<Scalar>& p) {
  using std::sqrt;
  const Scalar lb = length_to_breadth(U, p);
  if (lb < Scalar(1.0 - kLengthToBreadthTolerance)) {
    throw DomainError("length-to-breadth ratio below 1 at wind speed " + std::to_string(double(U)));
  }
  const Scalar gb = lb * lb - Scalar(1);
  const Scalar root = gb > Scalar(0) ? sqrt(gb) : Scalar(0);
  return Scalar(1) - lb / (lb + root);
}

/// C(R, U) = R (1 - LB / (LB + sqrt(GB))).
template <typename Scalar>
Scalar spread_coefficient(Scalar R, Scalar U, const EllipseParams<Scalar>& p) {
  return R * spread_factor(U, p);
}

/// dC/dU = R LB'(U) / (sqrt(GB) (LB + sqrt(GB))^2), using LB^2 - GB = 1.
template <typename Scalar>
Scalar spread_coefficient_du(Scalar R, Scalar U, const EllipseParams<Scalar>& p) {
  using std::max;
  using std::sqrt;
  if (R == Scalar(0)) return Scalar(0);
  const Scalar lb = length_to_breadth(U, p);
  if (lb < Scalar(1.0 - kLengthToBreadthTolerance)) {
    throw DomainError("length-to-breadth ratio below 1 at wind speed " + std::to_string(double(U)));
  }
  const Scalar gb = max(lb * lb - Scalar(1), Scalar(0));
  const Scalar root = max(sqrt(gb), Scalar(kSqrtGbFloor));
  const Scalar denom = lb + root;
  return R * length_to_breadth_derivative(U, p) / (root * denom * denom);
}

/// Planar front velocity (C sin(theta), C cos(theta)).
template <typename Scalar>
Vec2<Scalar> front_velocity(Scalar R, Scalar U, Scalar theta, const EllipseParams<Scalar>& p) {
  using std::cos;
  using std::sin;
  const Scalar C = spread_coefficient(R, U, p);
  return Vec2<Scalar>(C * sin(theta), C * cos(theta));
}

inline Vector2d front_velocity(const WindFuelState& wf, const EllipseParams<double>& p) {
  return front_velocity(wf.R, wf.U, wf.theta, p);
}

/// Spread rate R that yields the requested planar speed at wind speed U.
double spread_rate_for_speed(double speed, double U, const EllipseParams<double>& p);

struct FireFront {
  int id = 0;
  Vector2d q = Vector2d::Zero();
  Vector2d qdot = Vector2d::Zero();
  int born_at = 0;
};

enum class FireCase : int { Stationary = 1, Moving = 2, MovingSpreading = 3 };

/// Wind/fuel change taking effect at the given step.
struct WindFuelChange {
  int step = 0;
  WindFuelState wind_fuel;
};

struct FireMap {
  std::vector<FireFront> fronts;
  WindFuelState wind_fuel;
  std::vector<WindFuelChange> schedule;  // sorted by step
  FireCase fire_case = FireCase::Stationary;
  int spawn_rate_max = 0;
  int spawn_interval = 10;
  int max_fronts = 60;
  double process_noise = 0.05;
  std::uint64_t rng_seed = 0;
  int step = 0;
  int next_id = 0;
};

/// Euler step q + qdot dt plus Gaussian process noise, then refreshes qdot
/// from the current wind/fuel state.
FireFront propagate_front(const FireFront& front, const WindFuelState& wf,
                          const EllipseParams<double>& params, double dt, double sigma_w, Rng& rng);

/// Draws k ~ U{0..spawn_rate_max} children inside the parent's growth box
/// (+-|qdot_x| dt, +-|qdot_y| dt). Ids are taken from next_id.
std::vector<FireFront> spawn_fronts(const FireFront& front, const WindFuelState& wf,
                                    const EllipseParams<double>& params, int spawn_rate_max,
                                    double dt, int born_at, int& next_id, Rng& rng);

/// Advances every front by one step; applies case-3 spawning every
/// spawn_interval steps until max_fronts is reached.
FireMap simulate_step(const FireMap& map, const EllipseParams<double>& params, double dt);

}  // namespace firetrack
