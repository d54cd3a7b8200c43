#pragma once

#include "firetrack/aekf.hpp"
#include "firetrack/fire_dynamics.hpp"
#include "firetrack/route_planning.hpp"
#include "firetrack/safety_bounds.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace firetrack {

struct HumanTeam {
  int id = 0;
  Vector2d position = Vector2d::Zero();
  double vicinity_radius = 150.0;
};

enum class UavMode { Coverage, Safety, Idle };

struct UavAgent {
  int id = 0;
  Vector3d pose = Vector3d(0.0, 0.0, 50.0);
  double speed = 10.0;
  double half_angle = 0.5;
  UavMode mode = UavMode::Coverage;
  std::vector<Vector2d> route;  // cyclic waypoint sequence
  int route_index = 0;
  int replan_deadline = 0;
  int team_id = -1;  // team served in safety mode

  FleetParams fleet() const { return {speed, pose.z(), half_angle}; }
  Vector2d planar() const { return pose.head<2>(); }
  double fov() const { return fov_width(fleet()); }
};

struct SafetyContext {
  CaseTag case_tag = CaseTag::C1;
  double alpha_conf = 0.05;
  double dt = 1.0;
  EllipseParams<double> ellipse{};
  UrrMode urr_mode = UrrMode::Trace;
  int k_opt = 3;
};

struct FireUrr {
  int fire_id = 0;
  double urr = 0.0;
};

struct FeasibilityResult {
  bool pass = false;
  std::vector<FireUrr> urr;
  BoundResult bound;
  std::vector<SteinerWaypoint> waypoints;
  Tour tour;  // over waypoint indices
  double mst_cost = 0.0;
  double zeta_alpha = 0.0;

  double worst_urr() const;
  /// Waypoint positions in tour order.
  std::vector<Vector2d> route() const;
};

struct SafetySegment {
  int uav_id = -1;
  std::vector<int> fire_ids;
  FeasibilityResult test;
};

struct MissionPlan {
  int team_id = -1;
  std::vector<SafetySegment> segments;
  bool feasible = true;
  std::vector<FireUrr> urr;  // final per-fire values across segments
  double t_ub = 0.0;         // largest segment bound

  int uav_count() const { return static_cast<int>(segments.size()); }
};

/// Tracks whose estimated position lies within the team's vicinity radius.
std::vector<Track> vicinity_fires(std::span<const Track> tracks, const HumanTeam& team);

/// Steiner waypoints, MST, k-opt tour and the case bound over `tracks`, then
/// the URR of every fire against that bound. Passes iff the bound is feasible
/// and every URR <= 1.
FeasibilityResult urr_feasibility_test(std::span<const Track> tracks, const FleetParams& fleet,
                                       const SafetyContext& ctx);

/// Starts with the UAV nearest the team; while a segment fails and UAVs
/// remain, splits the worst-URR segment in two along its tour and gives the
/// second half to the idle UAV nearest its first waypoint.
MissionPlan recruit_and_partition(std::span<const Track> tracks, std::span<const UavAgent> available,
                                  const Vector2d& team_position, const SafetyContext& ctx);

/// Minimum-cost one-to-one assignment (Hungarian). Returns, for each row, the
/// assigned column.
std::vector<int> optimal_assignment(const Eigen::MatrixXd& cost);

struct KMeansResult {
  std::vector<Vector2d> centers;
  std::vector<int> labels;
};

/// k-means++ seeding followed by at most `max_iterations` Lloyd iterations.
KMeansResult kmeans(std::span<const Vector2d> nodes, int k, std::uint64_t seed, int max_iterations = 100);

/// K-means with k = |uavs|, then an optimal assignment of UAVs to cluster
/// centers by distance. Returns node indices per UAV (same order as uavs).
std::vector<std::vector<int>> cluster_and_assign(std::span<const Vector2d> nodes, std::span<const Vector2d> uavs,
                                                 std::uint64_t seed);

/// Moves the agent along its cyclic route by at most speed * dt.
void advance_along_route(UavAgent& agent, double dt);

/// Ground-truth fronts inside the agent's square footprint.
std::vector<int> fires_in_view(const UavAgent& agent, std::span<const FireFront> fronts);

struct CoverageContext {
  CaseTag case_tag = CaseTag::C1;
  double alpha_conf = 0.05;
  double dt = 1.0;
  EllipseParams<double> ellipse{};
  int step = 0;
  std::uint64_t seed = 0;
  int max_replan_steps = 30;
  bool force_replan = false;
  int k_opt = 3;
};

struct ObservationCommand {
  int uav_id = 0;
  int fire_id = 0;
};

struct CoverageStepResult {
  std::vector<UavAgent> agents;
  std::vector<ObservationCommand> observations;
  bool replanned = false;
};

/// One step of the distributed-coverage controller for agents in coverage
/// mode. Partitions and routes are rebuilt when a deadline expires, a route is
/// missing, or force_replan is set (a UAV was dismissed).
CoverageStepResult coverage_step(std::span<const UavAgent> agents, std::span<const Track> tracks,
                                 std::span<const FireFront> truth, const CoverageContext& ctx);

}  // namespace firetrack
