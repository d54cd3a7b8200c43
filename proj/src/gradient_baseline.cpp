#include "firetrack/gradient_baseline.hpp"

#include <algorithm>
#include <cmath>

namespace firetrack {

std::vector<UavAgent> gradient_coverage_step(std::span<const UavAgent> agents, std::span<const Vector2d> fires,
                                             const GradientConfig& cfg, double dt) {
  std::vector<UavAgent> out(agents.begin(), agents.end());
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const UavAgent& a = agents[i];
    const double g = a.fov();
    const double h = g / 2.0;
    const double sensing = cfg.sensing_range > 0.0 ? cfg.sensing_range : 2.0 * g;
    const double rho = cfg.separation_radius > 0.0 ? cfg.separation_radius : g;
    const Vector2d p = a.planar();

    Vector2d attraction = Vector2d::Zero();
    for (const auto& q : fires) {
      const Vector2d d = q - p;
      const double r2 = d.squaredNorm();
      if (r2 > sensing * sensing) continue;
      attraction += d * std::exp(-r2 / (2.0 * h * h));
    }

    Vector2d repulsion = Vector2d::Zero();
    for (std::size_t k = 0; k < agents.size(); ++k) {
      if (k == i) continue;
      const Vector2d d = p - agents[k].planar();
      const double dist = d.norm();
      if (dist >= rho) continue;
      Vector2d dir;
      if (dist > 1e-12) {
        dir = d / dist;
      } else {
        dir = Vector2d(a.id < agents[k].id ? -1.0 : 1.0, 0.0);  // coincident: split along x by id
      }
      repulsion += dir * (rho - dist);
    }

    Vector2d move = cfg.step_size * attraction + cfg.separation_weight * repulsion;
    const double cap = a.speed * dt;
    const double len = move.norm();
    if (len > cap) move *= cap / len;
    out[i].pose.head<2>() += move;

    const double lo = cfg.min_altitude > 0.0 ? cfg.min_altitude : a.pose.z();
    const double hi = cfg.max_altitude > 0.0 ? cfg.max_altitude : a.pose.z();
    out[i].pose.z() = std::clamp(a.pose.z(), std::min(lo, hi), std::max(lo, hi));
  }
  return out;
}

}  // namespace firetrack
