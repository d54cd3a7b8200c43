#pragma once

#include "firetrack/common.hpp"

#include <span>

namespace firetrack {

struct Circle {
  Vector2d center = Vector2d::Zero();
  double radius = 0.0;

  bool contains(const Vector2d& p, double eps = 1e-9) const { return (p - center).norm() <= radius + eps; }
};

/// Smallest enclosing circle (Welzl, iterative move-to-front form).
/// Deterministic: points are processed in the given order.
Circle smallest_enclosing_circle(std::span<const Vector2d> points);

/// Axis-aligned square of side `side` centered at `center`.
inline bool in_square(const Vector2d& p, const Vector2d& center, double side) {
  const double h = side / 2.0;
  return std::abs(p.x() - center.x()) <= h && std::abs(p.y() - center.y()) <= h;
}

}  // namespace firetrack
