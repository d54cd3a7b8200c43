#pragma once

#include "firetrack/common.hpp"

#include <span>
#include <vector>

namespace firetrack {

struct MstEdge {
  int u = 0;  // u < v
  int v = 0;
  double weight = 0.0;
};

struct SpanningTree {
  std::vector<MstEdge> edges;
  double length = 0.0;
};

/// Closed cycle over node indices.
struct Tour {
  std::vector<int> order;
  double length = 0.0;
};

struct SteinerWaypoint {
  Vector2d position = Vector2d::Zero();
  std::vector<int> members;  // fire ids
  double radius = 0.0;       // enclosing-circle radius of the members
};

struct FirePoint {
  int id = 0;
  Vector2d q = Vector2d::Zero();
};

double cycle_length(std::span<const int> order, std::span<const Vector2d> nodes);
double path_length(std::span<const int> order, std::span<const Vector2d> nodes);

/// Kruskal over the complete Euclidean graph; ties broken by (weight, u, v).
SpanningTree build_mst(std::span<const Vector2d> nodes);

/// Preorder walk of the tree from node 0 (children in ascending index order),
/// shortcutting repeated nodes. Length is at most twice the tree length.
Tour tour_from_mst(std::span<const Vector2d> nodes, const SpanningTree& mst);

/// First-improvement 2-opt until no improving exchange remains or max_passes
/// scans have run. For k = 3 a 3-opt pass follows each 2-opt convergence
/// while it keeps finding improvements (bounded by max_passes overall).
Tour k_opt_improve(const Tour& tour, std::span<const Vector2d> nodes, int k = 3, int max_passes = 50);

/// MST tour followed by k-opt.
Tour plan_tour(std::span<const Vector2d> nodes, int k = 3, int max_passes = 50);

/// Greedy close-enough reduction. Points are taken in id order and joined to
/// the nearest existing group whose smallest enclosing circle stays within
/// radius g/2; the waypoint is that circle's center.
std::vector<SteinerWaypoint> steiner_reduce(std::span<const FirePoint> fires, double g);

/// Splits the tour, read as an open path from order[0], into `parts`
/// contiguous non-empty segments of near-equal length.
std::vector<std::vector<int>> partition_path(const Tour& tour, std::span<const Vector2d> nodes, int parts = 2);

}  // namespace firetrack
