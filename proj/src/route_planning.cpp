#include "firetrack/route_planning.hpp"

#include "firetrack/geometry.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>

namespace firetrack {

namespace {

constexpr double kImproveEps = 1e-10;

struct DisjointSet {
  std::vector<int> parent;
  explicit DisjointSet(int n) : parent(static_cast<std::size_t>(n)) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[std::max(a, b)] = std::min(a, b);
    return true;
  }
};

double dist(std::span<const Vector2d> nodes, int a, int b) { return (nodes[a] - nodes[b]).norm(); }

bool two_opt_pass(std::vector<int>& o, std::span<const Vector2d> nodes) {
  const int n = static_cast<int>(o.size());
  bool improved = false;
  for (int i = 0; i + 2 < n; ++i) {
    for (int j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;  // adjacent through the closing edge
      const int a = o[i], b = o[i + 1], c = o[j], d = o[(j + 1) % n];
      const double delta = dist(nodes, a, c) + dist(nodes, b, d) - dist(nodes, a, b) - dist(nodes, c, d);
      if (delta < -kImproveEps) {
        std::reverse(o.begin() + i + 1, o.begin() + j + 1);
        improved = true;
      }
    }
  }
  return improved;
}

// All seven reconnections of three removed edges (a,b) (c,d) (e,f), where the
// tour reads A=[..a] B=[b..c] C=[d..e] D=[f..].
bool three_opt_pass(std::vector<int>& o, std::span<const Vector2d> nodes) {
  const int n = static_cast<int>(o.size());
  if (n < 6) return false;
  bool improved = false;
  for (int i = 0; i + 2 < n; ++i) {
    for (int j = i + 1; j + 1 < n; ++j) {
      for (int k = j + 1; k < n; ++k) {
        const int a = o[i], b = o[i + 1], c = o[j], d = o[j + 1], e = o[k], f = o[(k + 1) % n];
        if (f == a) continue;  // D empty: degenerates to a 2-opt move
        auto D = [&](int x, int y) { return dist(nodes, x, y); };
        const double base = D(a, b) + D(c, d) + D(e, f);
        // {delta, reverse B, reverse C, swap B and C}
        const std::tuple<double, bool, bool, bool> moves[] = {
            {D(a, c) + D(b, d) + D(e, f) - base, true, false, false},
            {D(a, b) + D(c, e) + D(d, f) - base, false, true, false},
            {D(a, c) + D(b, e) + D(d, f) - base, true, true, false},
            {D(a, d) + D(e, b) + D(c, f) - base, false, false, true},
            {D(a, e) + D(d, b) + D(c, f) - base, false, true, true},
            {D(a, d) + D(e, c) + D(b, f) - base, true, false, true},
            {D(a, e) + D(d, c) + D(b, f) - base, true, true, true},
        };
        const auto* best = &moves[0];
        for (const auto& m : moves) {
          if (std::get<0>(m) < std::get<0>(*best)) best = &m;
        }
        if (std::get<0>(*best) >= -kImproveEps) continue;
        std::vector<int> B(o.begin() + i + 1, o.begin() + j + 1);
        std::vector<int> C(o.begin() + j + 1, o.begin() + k + 1);
        if (std::get<1>(*best)) std::reverse(B.begin(), B.end());
        if (std::get<2>(*best)) std::reverse(C.begin(), C.end());
        auto out = o.begin() + i + 1;
        if (std::get<3>(*best)) {
          out = std::copy(C.begin(), C.end(), out);
          std::copy(B.begin(), B.end(), out);
        } else {
          out = std::copy(B.begin(), B.end(), out);
          std::copy(C.begin(), C.end(), out);
        }
        improved = true;
      }
    }
  }
  return improved;
}

}  // namespace

double cycle_length(std::span<const int> order, std::span<const Vector2d> nodes) {
  const std::size_t n = order.size();
  if (n < 2) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += dist(nodes, order[i], order[(i + 1) % n]);
  return total;
}

double path_length(std::span<const int> order, std::span<const Vector2d> nodes) {
  double total = 0.0;
  for (std::size_t i = 1; i < order.size(); ++i) total += dist(nodes, order[i - 1], order[i]);
  return total;
}

SpanningTree build_mst(std::span<const Vector2d> nodes) {
  const int n = static_cast<int>(nodes.size());
  std::vector<MstEdge> edges;
  edges.reserve(static_cast<std::size_t>(n) * (n > 0 ? n - 1 : 0) / 2);
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) edges.push_back({u, v, dist(nodes, u, v)});
  }
  std::sort(edges.begin(), edges.end(), [](const MstEdge& x, const MstEdge& y) {
    return std::tie(x.weight, x.u, x.v) < std::tie(y.weight, y.u, y.v);
  });
  SpanningTree tree;
  DisjointSet dsu(n);
  for (const auto& e : edges) {
    if (dsu.unite(e.u, e.v)) {
      tree.edges.push_back(e);
      tree.length += e.weight;
      if (static_cast<int>(tree.edges.size()) == n - 1) break;
    }
  }
  return tree;
}

Tour tour_from_mst(std::span<const Vector2d> nodes, const SpanningTree& mst) {
  const int n = static_cast<int>(nodes.size());
  Tour tour;
  if (n == 0) return tour;
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  for (const auto& e : mst.edges) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  for (auto& a : adj) std::sort(a.begin(), a.end());
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<int> stack{0};
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    if (seen[u]) continue;
    seen[u] = 1;
    tour.order.push_back(u);
    for (auto it = adj[u].rbegin(); it != adj[u].rend(); ++it) {
      if (!seen[*it]) stack.push_back(*it);
    }
  }
  tour.length = cycle_length(tour.order, nodes);
  return tour;
}

Tour k_opt_improve(const Tour& tour, std::span<const Vector2d> nodes, int k, int max_passes) {
  Tour out = tour;
  if (out.order.size() < 4) {
    out.length = cycle_length(out.order, nodes);
    return out;
  }
  int passes = 0;
  while (passes < max_passes) {
    ++passes;
    if (two_opt_pass(out.order, nodes)) continue;
    if (k < 3 || passes >= max_passes) break;
    ++passes;
    if (!three_opt_pass(out.order, nodes)) break;
  }
  out.length = cycle_length(out.order, nodes);
  return out;
}

Tour plan_tour(std::span<const Vector2d> nodes, int k, int max_passes) {
  return k_opt_improve(tour_from_mst(nodes, build_mst(nodes)), nodes, k, max_passes);
}

std::vector<SteinerWaypoint> steiner_reduce(std::span<const FirePoint> fires, double g) {
  if (!(g >= 0.0)) throw std::invalid_argument("steiner_reduce: g must be non-negative");
  std::vector<FirePoint> sorted(fires.begin(), fires.end());
  std::stable_sort(sorted.begin(), sorted.end(), [](const FirePoint& a, const FirePoint& b) { return a.id < b.id; });
  const double limit = g / 2.0 + 1e-9;

  std::vector<SteinerWaypoint> groups;
  std::vector<std::vector<Vector2d>> member_points;
  for (const auto& fire : sorted) {
    std::vector<int> candidates(groups.size());
    std::iota(candidates.begin(), candidates.end(), 0);
    std::stable_sort(candidates.begin(), candidates.end(), [&](int x, int y) {
      return (groups[x].position - fire.q).squaredNorm() < (groups[y].position - fire.q).squaredNorm();
    });
    bool placed = false;
    for (int gi : candidates) {
      std::vector<Vector2d> trial = member_points[gi];
      trial.push_back(fire.q);
      const Circle c = smallest_enclosing_circle(trial);
      if (c.radius <= limit) {
        groups[gi].position = c.center;
        groups[gi].radius = c.radius;
        groups[gi].members.push_back(fire.id);
        member_points[gi] = std::move(trial);
        placed = true;
        break;
      }
    }
    if (!placed) {
      groups.push_back({fire.q, {fire.id}, 0.0});
      member_points.push_back({fire.q});
    }
  }
  return groups;
}

std::vector<std::vector<int>> partition_path(const Tour& tour, std::span<const Vector2d> nodes, int parts) {
  const int n = static_cast<int>(tour.order.size());
  if (parts < 1 || parts > n) throw InvalidSplit("partition_path: cannot split " + std::to_string(n) +
                                                 " nodes into " + std::to_string(parts) + " parts");
  std::vector<double> arc(static_cast<std::size_t>(n), 0.0);
  for (int i = 1; i < n; ++i) arc[i] = arc[i - 1] + dist(nodes, tour.order[i - 1], tour.order[i]);
  const double target = arc[n - 1] / parts;

  std::vector<std::vector<int>> segments(1);
  segments[0].push_back(tour.order[0]);
  for (int i = 1; i < n; ++i) {
    const int current = static_cast<int>(segments.size()) - 1;
    const int remaining_nodes = n - i;
    const int remaining_parts = parts - 1 - current;
    const bool crossed = arc[i] >= target * (current + 1) - 1e-12;
    if (remaining_parts > 0 && (crossed || remaining_nodes == remaining_parts)) segments.emplace_back();
    segments.back().push_back(tour.order[i]);
  }
  return segments;
}

}  // namespace firetrack
