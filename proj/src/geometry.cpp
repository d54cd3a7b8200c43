#include "firetrack/geometry.hpp"

#include <cmath>
#include <vector>

namespace firetrack {

namespace {

Circle from_two(const Vector2d& a, const Vector2d& b) {
  return {(a + b) / 2.0, (a - b).norm() / 2.0};
}

Circle from_three(const Vector2d& a, const Vector2d& b, const Vector2d& c) {
  const Vector2d ab = b - a;
  const Vector2d ac = c - a;
  const double d = 2.0 * (ab.x() * ac.y() - ab.y() * ac.x());
  if (std::abs(d) < 1e-14) {
    // collinear: the circle on the farthest pair
    Circle best = from_two(a, b);
    for (const Circle& cand : {from_two(a, c), from_two(b, c)}) {
      if (cand.radius > best.radius) best = cand;
    }
    return best;
  }
  const double ab2 = ab.squaredNorm();
  const double ac2 = ac.squaredNorm();
  const Vector2d offset((ac.y() * ab2 - ab.y() * ac2) / d, (ab.x() * ac2 - ac.x() * ab2) / d);
  return {a + offset, offset.norm()};
}

}  // namespace

Circle smallest_enclosing_circle(std::span<const Vector2d> points) {
  if (points.empty()) return {};
  const std::vector<Vector2d> pts(points.begin(), points.end());
  Circle c{pts[0], 0.0};
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (c.contains(pts[i])) continue;
    c = {pts[i], 0.0};
    for (std::size_t j = 0; j < i; ++j) {
      if (c.contains(pts[j])) continue;
      c = from_two(pts[i], pts[j]);
      for (std::size_t k = 0; k < j; ++k) {
        if (c.contains(pts[k])) continue;
        c = from_three(pts[i], pts[j], pts[k]);
      }
    }
  }
  return c;
}

}  // namespace firetrack
