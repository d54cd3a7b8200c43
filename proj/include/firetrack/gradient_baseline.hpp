#pragma once

#include "firetrack/coordination.hpp"

#include <span>
#include <vector>

namespace firetrack {

/// Comparison controller: gradient ascent on a Gaussian-kernel density of the
/// fire points each UAV can see, with potential-field separation.
/// Zero radii mean "derive from the FOV width g".
struct GradientConfig {
  double step_size = 0.5;         // gain on the bandwidth-normalized gradient
  double separation_weight = 1.0;
  double separation_radius = 0.0;  // 0 -> g
  double sensing_range = 0.0;      // 0 -> 2 g
  double min_altitude = 0.0;       // 0 -> agent altitude
  double max_altitude = 0.0;
};

/// One controller step. Each UAV moves by
///   step_size * sum_j (q_j - p) exp(-|q_j - p|^2 / (2 h^2))       (h = g/2)
///   + separation_weight * sum_k (p - p_k)/|p - p_k| * (rho - |p - p_k|)
/// over fires within sensing range and UAVs within rho, capped at v dt.
std::vector<UavAgent> gradient_coverage_step(std::span<const UavAgent> agents, std::span<const Vector2d> fires,
                                             const GradientConfig& cfg, double dt);

}  // namespace firetrack
