#include "firetrack/coordination.hpp"

#include "firetrack/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace firetrack {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kUrrSlack = 1e-12;

std::vector<FirePoint> fire_points(std::span<const Track> tracks) {
  std::vector<FirePoint> pts;
  pts.reserve(tracks.size());
  for (const auto& t : tracks) pts.push_back({t.id, t.position()});
  return pts;
}

std::vector<Track> subset_by_ids(std::span<const Track> tracks, const std::vector<int>& ids) {
  std::vector<Track> out;
  for (const auto& t : tracks) {
    if (std::find(ids.begin(), ids.end(), t.id) != ids.end()) out.push_back(t);
  }
  return out;
}

int nearest_agent(std::span<const UavAgent> pool, const std::vector<char>& taken, const Vector2d& target) {
  int best = -1;
  double best_d = kInf;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (taken[i]) continue;
    const double d = (pool[i].planar() - target).norm();
    if (d < best_d || (d == best_d && best >= 0 && pool[i].id < pool[best].id)) {
      best_d = d;
      best = static_cast<int>(i);
    }
  }
  return best;
}

}  // namespace

double FeasibilityResult::worst_urr() const {
  if (!bound.feasible) return kInf;
  double w = 0.0;
  for (const auto& u : urr) w = std::max(w, u.urr);
  return w;
}

std::vector<Vector2d> FeasibilityResult::route() const {
  std::vector<Vector2d> r;
  r.reserve(tour.order.size());
  for (int i : tour.order) r.push_back(waypoints[i].position);
  return r;
}

std::vector<Track> vicinity_fires(std::span<const Track> tracks, const HumanTeam& team) {
  std::vector<Track> out;
  for (const auto& t : tracks) {
    if ((t.position() - team.position).norm() <= team.vicinity_radius) out.push_back(t);
  }
  return out;
}

FeasibilityResult urr_feasibility_test(std::span<const Track> tracks, const FleetParams& fleet,
                                       const SafetyContext& ctx) {
  FeasibilityResult res;
  const double g = fov_width(fleet);
  const auto points = fire_points(tracks);
  res.waypoints = steiner_reduce(points, g);

  std::vector<Vector2d> nodes;
  nodes.reserve(res.waypoints.size());
  for (const auto& w : res.waypoints) nodes.push_back(w.position);
  const SpanningTree mst = build_mst(nodes);
  res.mst_cost = mst.length;
  res.tour = k_opt_improve(tour_from_mst(nodes, mst), nodes, ctx.k_opt);
  res.zeta_alpha = tracks.empty() ? 0.0 : worst_case_speed(tracks, ctx.alpha_conf, ctx.ellipse);

  BoundInputs in;
  in.mst_cost = mst.length;
  in.n_fires = std::max<int>(1, static_cast<int>(tracks.size()));
  in.zeta_alpha = res.zeta_alpha;
  in.fov_width = g;
  in.alpha_conf = ctx.alpha_conf;
  res.bound = t_ub_for_case(ctx.case_tag, in, fleet);

  res.pass = res.bound.feasible;
  for (const auto& t : tracks) {
    const double ratio = res.bound.feasible ? urr(t, res.bound.t_ub, ctx.dt, ctx.urr_mode) : kInf;
    res.urr.push_back({t.id, ratio});
    if (!(ratio <= 1.0 + kUrrSlack)) res.pass = false;
  }
  return res;
}

MissionPlan recruit_and_partition(std::span<const Track> tracks, std::span<const UavAgent> available,
                                  const Vector2d& team_position, const SafetyContext& ctx) {
  if (available.empty()) throw NoUavAvailable("recruit_and_partition: no UAV available");
  MissionPlan plan;
  std::vector<char> taken(available.size(), 0);

  const int first = nearest_agent(available, taken, team_position);
  taken[first] = 1;
  SafetySegment seg;
  seg.uav_id = available[first].id;
  for (const auto& t : tracks) seg.fire_ids.push_back(t.id);
  seg.test = urr_feasibility_test(tracks, available[first].fleet(), ctx);
  plan.segments.push_back(std::move(seg));

  auto fleet_of = [&](int uav_id) {
    for (const auto& a : available) {
      if (a.id == uav_id) return a.fleet();
    }
    return available.front().fleet();
  };

  while (true) {
    int worst = -1;
    bool any_failing = false;
    for (std::size_t i = 0; i < plan.segments.size(); ++i) {
      const auto& s = plan.segments[i];
      if (s.test.pass) continue;
      any_failing = true;
      if (s.test.waypoints.size() < 2) continue;
      if (worst < 0 || s.test.worst_urr() > plan.segments[worst].test.worst_urr()) worst = static_cast<int>(i);
    }
    if (!any_failing) break;
    if (worst < 0) {
      plan.feasible = false;  // every failing segment is a single waypoint
      break;
    }
    const auto& target = plan.segments[worst];
    const auto nodes = target.test.route();
    Tour open;
    open.order.resize(nodes.size());
    std::iota(open.order.begin(), open.order.end(), 0);
    const auto halves = partition_path(open, nodes, 2);

    const int next = nearest_agent(available, taken, nodes[halves[1].front()]);
    if (next < 0) {
      plan.feasible = false;  // pool exhausted
      break;
    }
    taken[next] = 1;

    std::vector<int> ids[2];
    for (int h = 0; h < 2; ++h) {
      for (int node : halves[h]) {
        const auto& members = target.test.waypoints[target.test.tour.order[node]].members;
        ids[h].insert(ids[h].end(), members.begin(), members.end());
      }
    }
    SafetySegment a, b;
    a.uav_id = target.uav_id;
    a.fire_ids = ids[0];
    a.test = urr_feasibility_test(subset_by_ids(tracks, ids[0]), fleet_of(a.uav_id), ctx);
    b.uav_id = available[next].id;
    b.fire_ids = ids[1];
    b.test = urr_feasibility_test(subset_by_ids(tracks, ids[1]), available[next].fleet(), ctx);
    plan.segments[worst] = std::move(a);
    plan.segments.insert(plan.segments.begin() + worst + 1, std::move(b));
  }

  for (const auto& s : plan.segments) {
    plan.urr.insert(plan.urr.end(), s.test.urr.begin(), s.test.urr.end());
    plan.t_ub = std::max(plan.t_ub, s.test.bound.t_ub);
    if (!s.test.pass) plan.feasible = false;
  }
  std::sort(plan.urr.begin(), plan.urr.end(), [](const FireUrr& x, const FireUrr& y) { return x.fire_id < y.fire_id; });
  return plan;
}

std::vector<int> optimal_assignment(const Eigen::MatrixXd& cost) {
  // Hungarian method with potentials (rows <= cols), 1-based internals.
  const int n = static_cast<int>(cost.rows());
  const int m = static_cast<int>(cost.cols());
  if (n == 0) return {};
  if (n > m) throw std::invalid_argument("optimal_assignment: more rows than columns");
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<int> p(m + 1, 0), way(m + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(m + 1, kInf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = kInf;
      int j1 = 0;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> assignment(static_cast<std::size_t>(n), -1);
  for (int j = 1; j <= m; ++j) {
    if (p[j] != 0) assignment[p[j] - 1] = j - 1;
  }
  return assignment;
}

KMeansResult kmeans(std::span<const Vector2d> nodes, int k, std::uint64_t seed, int max_iterations) {
  KMeansResult res;
  const int n = static_cast<int>(nodes.size());
  if (n == 0 || k <= 0) return res;
  Rng rng(mix64(seed));

  std::uniform_int_distribution<int> pick(0, n - 1);
  res.centers.push_back(nodes[pick(rng)]);
  std::vector<double> d2(static_cast<std::size_t>(n));
  while (static_cast<int>(res.centers.size()) < k) {
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      double best = kInf;
      for (const auto& c : res.centers) best = std::min(best, (nodes[i] - c).squaredNorm());
      d2[i] = best;
      total += best;
    }
    if (total <= 0.0) {
      res.centers.push_back(res.centers.back());  // fewer distinct nodes than clusters
      continue;
    }
    std::uniform_real_distribution<double> u(0.0, total);
    double target = u(rng);
    int chosen = n - 1;
    for (int i = 0; i < n; ++i) {
      target -= d2[i];
      if (target <= 0.0 && d2[i] > 0.0) {
        chosen = i;
        break;
      }
    }
    res.centers.push_back(nodes[chosen]);
  }

  res.labels.assign(static_cast<std::size_t>(n), 0);
  for (int iter = 0; iter < max_iterations; ++iter) {
    bool changed = iter == 0;
    for (int i = 0; i < n; ++i) {
      int best = 0;
      double best_d = kInf;
      for (int c = 0; c < k; ++c) {
        const double d = (nodes[i] - res.centers[c]).squaredNorm();
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (res.labels[i] != best) changed = true;
      res.labels[i] = best;
    }
    std::vector<Vector2d> sums(static_cast<std::size_t>(k), Vector2d::Zero());
    std::vector<int> counts(static_cast<std::size_t>(k), 0);
    for (int i = 0; i < n; ++i) {
      sums[res.labels[i]] += nodes[i];
      ++counts[res.labels[i]];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) res.centers[c] = sums[c] / counts[c];
    }
    if (!changed) break;
  }
  return res;
}

std::vector<std::vector<int>> cluster_and_assign(std::span<const Vector2d> nodes, std::span<const Vector2d> uavs,
                                                 std::uint64_t seed) {
  const int k = static_cast<int>(uavs.size());
  std::vector<std::vector<int>> out(static_cast<std::size_t>(k));
  if (k == 0 || nodes.empty()) return out;
  if (k == 1) {
    out[0].resize(nodes.size());
    std::iota(out[0].begin(), out[0].end(), 0);
    return out;
  }
  const KMeansResult km = kmeans(nodes, k, seed);
  Eigen::MatrixXd cost(k, k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) cost(i, j) = (uavs[i] - km.centers[j]).norm();
  }
  const auto assignment = optimal_assignment(cost);
  std::vector<int> owner(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) owner[assignment[i]] = i;
  for (std::size_t n = 0; n < nodes.size(); ++n) out[owner[km.labels[n]]].push_back(static_cast<int>(n));
  return out;
}

void advance_along_route(UavAgent& agent, double dt) {
  if (agent.route.empty()) return;
  double budget = agent.speed * dt;
  // at most one full lap per step
  for (std::size_t hops = 0; hops <= agent.route.size() && budget > 0.0; ++hops) {
    const Vector2d target = agent.route[agent.route_index];
    const Vector2d delta = target - agent.planar();
    const double d = delta.norm();
    if (d > budget) {
      agent.pose.head<2>() += delta * (budget / d);
      return;
    }
    agent.pose.head<2>() = target;
    budget -= d;
    if (agent.route.size() == 1) return;
    agent.route_index = (agent.route_index + 1) % static_cast<int>(agent.route.size());
  }
}

std::vector<int> fires_in_view(const UavAgent& agent, std::span<const FireFront> fronts) {
  std::vector<int> ids;
  const double g = agent.fov();
  for (const auto& f : fronts) {
    if (in_square(f.q, agent.planar(), g)) ids.push_back(f.id);
  }
  return ids;
}

CoverageStepResult coverage_step(std::span<const UavAgent> agents, std::span<const Track> tracks,
                                 std::span<const FireFront> truth, const CoverageContext& ctx) {
  CoverageStepResult res;
  res.agents.assign(agents.begin(), agents.end());

  std::vector<int> coverage;
  for (std::size_t i = 0; i < res.agents.size(); ++i) {
    if (res.agents[i].mode == UavMode::Coverage) coverage.push_back(static_cast<int>(i));
  }

  bool replan = ctx.force_replan;
  for (int i : coverage) {
    const auto& a = res.agents[i];
    if (ctx.step >= a.replan_deadline || (a.route.empty() && !tracks.empty())) replan = true;
  }

  if (replan && !coverage.empty()) {
    res.replanned = true;
    double g = kInf;
    for (int i : coverage) g = std::min(g, res.agents[i].fov());
    const auto waypoints = steiner_reduce(fire_points(tracks), g);
    std::vector<Vector2d> nodes;
    for (const auto& w : waypoints) nodes.push_back(w.position);
    std::vector<Vector2d> positions;
    for (int i : coverage) positions.push_back(res.agents[i].planar());
    const auto parts = cluster_and_assign(nodes, positions, ctx.seed ^ static_cast<std::uint64_t>(ctx.step));

    SafetyContext sctx{ctx.case_tag, ctx.alpha_conf, ctx.dt, ctx.ellipse, UrrMode::Trace, ctx.k_opt};
    for (std::size_t c = 0; c < coverage.size(); ++c) {
      auto& agent = res.agents[coverage[c]];
      agent.route.clear();
      agent.route_index = 0;
      agent.replan_deadline = ctx.step + ctx.max_replan_steps;
      if (parts[c].empty()) continue;

      std::vector<int> member_ids;
      for (int w : parts[c]) {
        member_ids.insert(member_ids.end(), waypoints[w].members.begin(), waypoints[w].members.end());
      }
      const auto members = subset_by_ids(tracks, member_ids);
      const auto test = urr_feasibility_test(members, agent.fleet(), sctx);
      agent.route = test.route();

      // enter the cycle at the waypoint nearest the UAV
      double best = kInf;
      for (std::size_t w = 0; w < agent.route.size(); ++w) {
        const double d = (agent.route[w] - agent.planar()).norm();
        if (d < best) {
          best = d;
          agent.route_index = static_cast<int>(w);
        }
      }
      if (test.bound.feasible) {
        const int horizon = std::clamp(horizon_steps(test.bound.t_ub, ctx.dt), 1, ctx.max_replan_steps);
        agent.replan_deadline = ctx.step + horizon;
      }
    }
  }

  for (int i : coverage) {
    auto& agent = res.agents[i];
    advance_along_route(agent, ctx.dt);
    for (int fire : fires_in_view(agent, truth)) res.observations.push_back({agent.id, fire});
  }
  return res;
}

}  // namespace firetrack
