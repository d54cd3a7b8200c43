#include "firetrack/harness.hpp"

#include "json.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>

namespace firetrack {

namespace {

// substream ids
constexpr std::uint64_t kLayoutStream = 0x4c41594fULL;
constexpr std::uint64_t kFireStream = 0x46495245ULL;
constexpr std::uint64_t kUavStream = 0x55415653ULL;
constexpr std::uint64_t kTeamStream = 0x5445414dULL;
constexpr std::uint64_t kDetectStream = 0x44455443ULL;
constexpr std::uint64_t kObsStream = 0x4f425356ULL;
constexpr std::uint64_t kGpsStream = 0x47505321ULL;
constexpr std::uint64_t kPlanStream = 0x504c414eULL;

constexpr int kTeamSlots = 8;  // generated team positions are spread over this many sectors

Vector2d area_center(const ScenarioConfig& c) { return {c.area_width / 2.0, c.area_height / 2.0}; }

Vector2d clamp_to_area(const ScenarioConfig& c, Vector2d p) {
  p.x() = std::clamp(p.x(), 0.0, c.area_width);
  p.y() = std::clamp(p.y(), 0.0, c.area_height);
  return p;
}

WindFuelState initial_wind_fuel(const ScenarioConfig& c) {
  const double R = spread_rate_for_speed(c.fire.resolved_speed(), c.fire.wind_speed, c.fire.ellipse);
  return {R, c.fire.wind_speed, c.fire.wind_azimuth};
}

FireMap initial_fire_map(const ScenarioConfig& c) {
  FireMap m;
  m.fronts = initial_fronts(c);
  m.wind_fuel = initial_wind_fuel(c);
  for (auto change : c.fire.schedule) {
    change.wind_fuel.R = spread_rate_for_speed(c.fire.resolved_speed(), change.wind_fuel.U, c.fire.ellipse);
    m.schedule.push_back(change);
  }
  m.fire_case = static_cast<FireCase>(c.fire.fire_case);
  m.spawn_rate_max = c.fire.fire_case == 3 ? c.fire.spawn_rate_max : 0;
  m.spawn_interval = c.fire.spawn_interval;
  m.max_fronts = c.fire.max_fronts;
  m.process_noise = c.fire.process_noise;
  m.rng_seed = mix64(c.seed ^ kFireStream);
  m.step = 0;
  m.next_id = static_cast<int>(m.fronts.size());
  for (auto& f : m.fronts) f.qdot = front_velocity(m.wind_fuel, c.fire.ellipse);
  return m;
}

StateVector<double> true_state(const FireFront& f, const Vector3d& pose, const WindFuelState& wf) {
  StateVector<double> s;
  s << f.q, pose, wf.R, wf.U, wf.theta;
  return s;
}

ObservationVector<double> noisy_observation(const ScenarioConfig& c, const FireFront& f, const Vector3d& pose,
                                            const WindFuelState& wf, int step) {
  Rng rng = substream(c.seed ^ kObsStream, static_cast<std::uint64_t>(f.id), static_cast<std::uint64_t>(step));
  std::normal_distribution<double> n01(0.0, 1.0);
  ObservationVector<double> z = observe(true_state(f, pose, wf));
  z[0] += c.sensors.angle_noise * n01(rng);
  z[1] += c.sensors.angle_noise * n01(rng);
  z[2] += c.sensors.spread_rate_noise * n01(rng);
  z[3] += c.sensors.wind_speed_noise * n01(rng);
  z[4] = wrap_two_pi(z[4] + c.sensors.azimuth_noise * n01(rng));
  return z;
}

Vector3d gps_pose(const ScenarioConfig& c, const UavAgent& a, int step) {
  Rng rng = substream(c.seed ^ kGpsStream, static_cast<std::uint64_t>(a.id), static_cast<std::uint64_t>(step));
  std::normal_distribution<double> n(0.0, c.sensors.gps_noise);
  Vector3d p = a.pose;
  if (c.sensors.gps_noise > 0.0) {
    p.x() += n(rng);
    p.y() += n(rng);
    p.z() += n(rng);
  }
  return p;
}

Track detected_track(const ScenarioConfig& c, const FilterConfig<double>& fc, const FireFront& f,
                     const WindFuelState& wf) {
  Rng rng = substream(c.seed ^ kDetectStream, static_cast<std::uint64_t>(f.id), 0);
  std::normal_distribution<double> n01(0.0, 1.0);
  StateVector<double> s;
  s << f.q.x() + c.sensors.detection_noise * n01(rng), f.q.y() + c.sensors.detection_noise * n01(rng), f.q.x(),
      f.q.y(), c.uavs.altitude, std::max(0.0, wf.R + c.sensors.spread_rate_noise * n01(rng)),
      std::max(0.0, wf.U + c.sensors.wind_speed_noise * n01(rng)),
      wrap_two_pi(wf.theta + c.sensors.azimuth_noise * n01(rng));
  return make_track(f.id, s, fc, 0);
}

Track observed_track(const FilterConfig<double>& fc, int id, const ObservationVector<double>& z,
                     const Vector3d& pose, int step) {
  StateVector<double> s;
  s << invert_look_angles(z[0], z[1], pose), pose, std::max(0.0, z[2]), std::max(0.0, z[3]), wrap_two_pi(z[4]);
  return make_track(id, s, fc, step);
}

std::vector<Track> track_list(const std::map<int, Track>& tracks) {
  std::vector<Track> out;
  out.reserve(tracks.size());
  for (const auto& [id, t] : tracks) out.push_back(t);
  return out;
}

int nearest_waypoint(const std::vector<Vector2d>& route, const Vector2d& p) {
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < route.size(); ++i) {
    const double d = (route[i] - p).norm();
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(i);
    }
  }
  return best;
}

struct TeamState {
  HumanTeam team;
  int recheck_at = 0;
};

class Simulation {
 public:
  explicit Simulation(const ScenarioConfig& cfg)
      : cfg_(cfg), fc_(cfg.filter_config()), fire_(initial_fire_map(cfg)), agents_(initial_uavs(cfg)) {
    for (const auto& t : initial_teams(cfg)) teams_.push_back({t, 0});
    for (const auto& f : fire_.fronts) tracks_.emplace(f.id, detected_track(cfg_, fc_, f, fire_.wind_fuel));
    metrics_.drones_recruited.assign(teams_.size(), 0);
  }

  RunMetrics run() {
    metrics_.steps.reserve(cfg_.duration);
    for (int step = 1; step <= cfg_.duration; ++step) {
      const auto t0 = std::chrono::steady_clock::now();
      advance(step);
      const auto t1 = std::chrono::steady_clock::now();
      metrics_.wall_clock_ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return std::move(metrics_);
  }

 private:
  void advance(int step) {
    fire_ = simulate_step(fire_, cfg_.fire.ellipse, cfg_.dt);

    // which UAV (lowest id) sees each fire this step
    std::map<int, int> viewer;
    for (std::size_t a = 0; a < agents_.size(); ++a) {
      for (int fid : fires_in_view(agents_[a], fire_.fronts)) {
        if (!viewer.count(fid)) viewer[fid] = static_cast<int>(a);
      }
    }
    const int uncovered = static_cast<int>(fire_.fronts.size() - viewer.size());

    filter_step(step, viewer);
    if (cfg_.controller == Controller::Proposed) {
      proposed_step(step);
    } else {
      gradient_step();
    }
    record(step, uncovered);
  }

  void filter_step(int step, const std::map<int, int>& viewer) {
    std::map<int, Vector3d> gps;
    for (const auto& f : fire_.fronts) {
      auto v = viewer.find(f.id);
      auto it = tracks_.find(f.id);
      if (v == viewer.end()) {
        if (it != tracks_.end()) it->second = predict(it->second, cfg_.dt, cfg_.fire.ellipse);
        continue;
      }
      const UavAgent& uav = agents_[v->second];
      if (!gps.count(uav.id)) gps[uav.id] = gps_pose(cfg_, uav, step);
      const Vector3d& pose = gps[uav.id];
      const auto z = noisy_observation(cfg_, f, uav.pose, fire_.wind_fuel, step);
      if (it == tracks_.end()) {
        tracks_.emplace(f.id, observed_track(fc_, f.id, z, pose, step));
        continue;
      }
      Track predicted = predict(it->second, pose, cfg_.dt, cfg_.fire.ellipse);
      try {
        auto res = update_and_adapt(predicted, z, fc_);
        res.track.last_update = step;
        it->second = res.track;
      } catch (const SingularResidual&) {
        it->second = predicted;
      }
    }
  }

  SafetyContext safety_context() const {
    return {cfg_.case_tag(), cfg_.alpha_conf, cfg_.dt, cfg_.fire.ellipse, cfg_.urr_mode, cfg_.k_opt};
  }

  void release_team(int team_id) {
    for (auto& a : agents_) {
      if (a.mode == UavMode::Safety && a.team_id == team_id) {
        a.mode = UavMode::Coverage;
        a.team_id = -1;
        a.route.clear();
        a.route_index = 0;
      }
    }
  }

  void plan_team(int step, std::size_t ti, const std::vector<Track>& tracks) {
    TeamState& ts = teams_[ti];
    release_team(ts.team.id);
    const auto vicinity = vicinity_fires(tracks, ts.team);
    if (vicinity.empty()) {
      ts.recheck_at = step + cfg_.max_safety_recheck_steps;
      return;
    }

    PlanRecord rec;
    rec.step = step;
    rec.team_id = ts.team.id;
    rec.vicinity_fires = static_cast<int>(vicinity.size());
    rec.bound_confidence = bound_confidence(static_cast<int>(vicinity.size()), cfg_.alpha_conf).joint;

    std::vector<UavAgent> pool;
    for (const auto& a : agents_) {
      if (a.mode != UavMode::Safety) pool.push_back(a);
    }
    if (pool.empty()) {
      rec.feasible = false;
      rec.t_ub = std::numeric_limits<double>::infinity();
      rec.worst_urr = std::numeric_limits<double>::infinity();
      metrics_.safety_feasible = false;
      metrics_.plans.push_back(rec);
      ts.recheck_at = step + 1;
      return;
    }

    const MissionPlan plan = recruit_and_partition(vicinity, pool, ts.team.position, safety_context());
    for (const auto& seg : plan.segments) {
      auto it = std::find_if(agents_.begin(), agents_.end(), [&](const UavAgent& a) { return a.id == seg.uav_id; });
      if (it == agents_.end()) continue;
      it->mode = UavMode::Safety;
      it->team_id = ts.team.id;
      it->route = seg.test.route();
      it->route_index = it->route.empty() ? 0 : nearest_waypoint(it->route, it->planar());
    }

    rec.drones = plan.uav_count();
    rec.feasible = plan.feasible;
    rec.t_ub = plan.t_ub;
    rec.worst_urr = 0.0;
    for (const auto& u : plan.urr) rec.worst_urr = std::max(rec.worst_urr, u.urr);
    metrics_.plans.push_back(rec);
    if (!plan.feasible) metrics_.safety_feasible = false;
    metrics_.drones_recruited[ti] = std::max(metrics_.drones_recruited[ti], rec.drones);

    const int horizon = std::isfinite(plan.t_ub) ? horizon_steps(plan.t_ub, cfg_.dt) : cfg_.max_safety_recheck_steps;
    ts.recheck_at = step + std::clamp(horizon, 1, cfg_.max_safety_recheck_steps);
  }

  std::vector<int> safety_roster() const {
    std::vector<int> ids;
    for (const auto& a : agents_) {
      if (a.mode == UavMode::Safety) ids.push_back(a.id);
    }
    return ids;
  }

  void proposed_step(int step) {
    const auto tracks = track_list(tracks_);
    const auto before = safety_roster();
    for (std::size_t ti = 0; ti < teams_.size(); ++ti) {
      if (step >= teams_[ti].recheck_at) plan_team(step, ti, tracks);
    }
    // dismissal or return of a UAV repartitions the coverage fleet
    if (safety_roster() != before) force_replan_ = true;

    for (auto& a : agents_) {
      if (a.mode == UavMode::Safety) advance_along_route(a, cfg_.dt);
    }

    CoverageContext ctx;
    ctx.case_tag = cfg_.case_tag();
    ctx.alpha_conf = cfg_.alpha_conf;
    ctx.dt = cfg_.dt;
    ctx.ellipse = cfg_.fire.ellipse;
    ctx.step = step;
    ctx.seed = mix64(cfg_.seed ^ kPlanStream);
    ctx.max_replan_steps = cfg_.max_replan_steps;
    ctx.force_replan = force_replan_;
    ctx.k_opt = cfg_.k_opt;
    auto res = coverage_step(agents_, tracks, fire_.fronts, ctx);
    agents_ = std::move(res.agents);
    force_replan_ = false;
  }

  void gradient_step() {
    std::vector<Vector2d> points;
    points.reserve(fire_.fronts.size());
    for (const auto& f : fire_.fronts) points.push_back(f.q);
    agents_ = gradient_coverage_step(agents_, points, cfg_.gradient, cfg_.dt);
  }

  void record(int step, int uncovered) {
    StepRecord r;
    r.step = step;
    r.uncovered_count = uncovered;
    r.cum_uncertainty = (metrics_.steps.empty() ? 0 : metrics_.steps.back().cum_uncertainty) + uncovered;
    double sum = 0.0;
    for (const auto& [id, t] : tracks_) {
      const double tr = t.P.trace();
      sum += tr;
      metrics_.trace_series[id].push_back({step, tr});
    }
    r.mean_trace_P = tracks_.empty() ? 0.0 : sum / static_cast<double>(tracks_.size());
    int safety = 0;
    for (const auto& a : agents_) {
      if (a.mode != UavMode::Idle) ++r.active_uavs;
      if (a.mode == UavMode::Safety) ++safety;
    }
    metrics_.peak_safety_drones = std::max(metrics_.peak_safety_drones, safety);
    metrics_.steps.push_back(r);
  }

  const ScenarioConfig& cfg_;
  FilterConfig<double> fc_;
  FireMap fire_;
  std::vector<UavAgent> agents_;
  std::vector<TeamState> teams_;
  std::map<int, Track> tracks_;
  bool force_replan_ = false;
  RunMetrics metrics_;
};

std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  std::ostringstream ss;
  ss << std::setprecision(10) << v;
  return ss.str();
}

}  // namespace

std::vector<FireFront> initial_fronts(const ScenarioConfig& c) {
  Rng rng = substream(c.seed ^ kLayoutStream, 0, 0);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::normal_distribution<double> n01(0.0, 1.0);
  const Vector2d center = area_center(c);
  const int n = c.fire.initial_count;
  std::vector<FireFront> out;
  out.reserve(n);

  std::vector<Vector2d> cluster_centers;
  if (c.fire.layout == FireLayout::Clusters) {
    const double offset = kTwoPi * u01(rng);
    for (int k = 0; k < c.fire.clusters; ++k) {
      const double a = offset + kTwoPi * k / c.fire.clusters;
      cluster_centers.push_back(center + c.fire.layout_radius * Vector2d(std::cos(a), std::sin(a)));
    }
  }

  for (int i = 0; i < n; ++i) {
    Vector2d q = center;
    switch (c.fire.layout) {
      case FireLayout::Ring: {
        const double a = kTwoPi * (i + 0.5 * (u01(rng) - 0.5)) / n;
        const double r = c.fire.layout_radius + 5.0 * n01(rng);
        q = center + r * Vector2d(std::cos(a), std::sin(a));
        break;
      }
      case FireLayout::Clusters: {
        const Vector2d& cc = cluster_centers[i % cluster_centers.size()];
        q = cc + c.fire.cluster_spread * Vector2d(n01(rng), n01(rng));
        break;
      }
      case FireLayout::Uniform: {
        const double a = kTwoPi * u01(rng);
        const double r = c.fire.layout_radius * std::sqrt(u01(rng));
        q = center + r * Vector2d(std::cos(a), std::sin(a));
        break;
      }
    }
    FireFront f;
    f.id = i;
    f.q = clamp_to_area(c, q);
    out.push_back(f);
  }
  return out;
}

std::vector<UavAgent> initial_uavs(const ScenarioConfig& c) {
  std::vector<UavAgent> out;
  for (int i = 0; i < c.uavs.count; ++i) {
    Rng rng = substream(c.seed ^ kUavStream, static_cast<std::uint64_t>(i), 0);
    std::uniform_real_distribution<double> ux(0.0, c.area_width), uy(0.0, c.area_height);
    UavAgent a;
    a.id = i;
    const double x = ux(rng);
    const double y = uy(rng);
    a.pose = Vector3d(x, y, c.uavs.altitude);
    a.speed = c.uavs.speed;
    a.half_angle = c.uavs.half_angle;
    a.mode = UavMode::Coverage;
    out.push_back(a);
  }
  return out;
}

std::vector<HumanTeam> initial_teams(const ScenarioConfig& c) {
  std::vector<HumanTeam> out;
  Rng rng = substream(c.seed ^ kTeamStream, 0, 0);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const double offset = kTwoPi * u01(rng);
  const Vector2d center = area_center(c);
  for (int j = 0; j < c.teams.count; ++j) {
    HumanTeam t;
    t.id = j;
    t.vicinity_radius = c.teams.vicinity_radius;
    if (j < static_cast<int>(c.teams.positions.size())) {
      t.position = c.teams.positions[j];
    } else {
      const double a = offset + kTwoPi * j / kTeamSlots;
      t.position = clamp_to_area(c, center + (c.fire.layout_radius + c.teams.standoff) * Vector2d(std::cos(a), std::sin(a)));
    }
    out.push_back(t);
  }
  return out;
}

RunMetrics run_scenario(const ScenarioConfig& cfg) {
  validate(cfg);
  Simulation sim(cfg);
  return sim.run();
}

ScenarioConfig with_case(const ScenarioConfig& base, int fire_case) {
  ScenarioConfig c = base;
  c.fire.fire_case = fire_case;
  c.fire.speed.reset();
  return c;
}

std::uint64_t trial_seed(const ScenarioConfig& base, int trial) {
  return base.seed + static_cast<std::uint64_t>(trial);
}

int safety_pool_cap(const ScenarioConfig& base, int teams) { return std::max(base.uavs.count, 8 * teams); }

int min_safety_drones(const ScenarioConfig& cfg, int pool_cap) {
  ScenarioConfig c = cfg;
  c.controller = Controller::Proposed;
  c.uavs.count = pool_cap;
  const RunMetrics demand = run_scenario(c);
  if (!demand.safety_feasible) return pool_cap + 1;
  for (int n = std::max(1, demand.peak_safety_drones); n < pool_cap; ++n) {
    c.uavs.count = n;
    if (run_scenario(c).safety_feasible) return n;
  }
  return pool_cap;
}

std::vector<SafetySweepRow> sweep_safety(const ScenarioConfig& base, int max_teams, int trials,
                                         const std::vector<int>& cases) {
  if (trials < 1) throw std::invalid_argument("sweep_safety: trials must be >= 1");
  std::vector<SafetySweepRow> rows;
  for (int fire_case : cases) {
    for (int teams = 1; teams <= max_teams; ++teams) {
      for (int trial = 0; trial < trials; ++trial) {
        ScenarioConfig c = with_case(base, fire_case);
        c.teams.count = teams;
        c.seed = trial_seed(base, trial);
        const int cap = safety_pool_cap(base, teams);
        rows.push_back({fire_case, teams, trial, min_safety_drones(c, cap)});
      }
    }
  }
  return rows;
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double standard_error(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1)) / std::sqrt(static_cast<double>(v.size()));
}

std::vector<SweepSummaryRow> summarize_sweep(const std::vector<SafetySweepRow>& rows) {
  std::map<std::pair<int, int>, std::vector<double>> cells;
  for (const auto& r : rows) cells[{r.fire_case, r.teams}].push_back(r.min_drones);
  std::vector<SweepSummaryRow> out;
  for (const auto& [key, v] : cells) out.push_back({key.first, key.second, mean_of(v), standard_error(v)});
  return out;
}

std::vector<ComparisonRow> compare_controllers(const ScenarioConfig& base, const std::vector<int>& drones, int trials,
                                               const std::vector<Controller>& controllers,
                                               const std::vector<int>& cases) {
  if (trials < 1) throw std::invalid_argument("compare_controllers: trials must be >= 1");
  std::vector<ComparisonRow> rows;
  for (int fire_case : cases) {
    for (Controller ctl : controllers) {
      for (int n : drones) {
        for (int trial = 0; trial < trials; ++trial) {
          ScenarioConfig c = with_case(base, fire_case);
          c.controller = ctl;
          c.uavs.count = n;
          c.seed = trial_seed(base, trial);
          rows.push_back({fire_case, ctl, n, trial, run_scenario(c).cumulative_uncertainty()});
        }
      }
    }
  }
  return rows;
}

std::vector<ComparisonSummaryRow> summarize_comparison(const std::vector<ComparisonRow>& rows) {
  std::map<std::tuple<int, int, int>, std::vector<double>> cells;
  for (const auto& r : rows) {
    cells[{r.fire_case, static_cast<int>(r.controller), r.drones}].push_back(static_cast<double>(r.cum_uncertainty));
  }
  std::vector<ComparisonSummaryRow> out;
  for (const auto& [key, v] : cells) {
    out.push_back({std::get<0>(key), static_cast<Controller>(std::get<1>(key)), std::get<2>(key), mean_of(v),
                   standard_error(v)});
  }
  return out;
}

PairedTest paired_t_test_less(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2) throw std::invalid_argument("paired test needs two equal samples, n >= 2");
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  PairedTest t;
  t.n = static_cast<int>(d.size());
  t.mean_difference = mean_of(d);
  const double se = standard_error(d);
  if (se == 0.0) {
    t.t_statistic = t.mean_difference < 0 ? -std::numeric_limits<double>::infinity()
                                          : (t.mean_difference > 0 ? std::numeric_limits<double>::infinity() : 0.0);
    t.p_value = t.mean_difference < 0 ? 0.0 : 1.0;
    return t;
  }
  t.t_statistic = t.mean_difference / se;
  boost::math::students_t dist(static_cast<double>(t.n - 1));
  t.p_value = boost::math::cdf(dist, t.t_statistic);
  return t;
}

void write_steps_csv(std::ostream& os, const RunMetrics& m) {
  os << "step,uncovered_count,cum_uncertainty,mean_trace_P,active_uavs\n";
  for (const auto& r : m.steps) {
    os << r.step << ',' << r.uncovered_count << ',' << r.cum_uncertainty << ',' << num(r.mean_trace_P) << ','
       << r.active_uavs << '\n';
  }
}

void write_plans_csv(std::ostream& os, const RunMetrics& m) {
  os << "step,team,vicinity_fires,drones,feasible,t_ub,worst_urr,bound_confidence\n";
  for (const auto& p : m.plans) {
    os << p.step << ',' << p.team_id << ',' << p.vicinity_fires << ',' << p.drones << ',' << (p.feasible ? 1 : 0)
       << ',' << num(p.t_ub) << ',' << num(p.worst_urr) << ',' << num(p.bound_confidence) << '\n';
  }
}

void write_traces_csv(std::ostream& os, const RunMetrics& m) {
  os << "fire_id,step,trace_P\n";
  for (const auto& [id, series] : m.trace_series) {
    for (const auto& s : series) os << id << ',' << s.step << ',' << num(s.trace_P) << '\n';
  }
}

void write_run_json(std::ostream& os, const RunMetrics& m) {
  using nlohmann::json;
  json doc;
  json steps = json::array();
  for (const auto& r : m.steps) {
    steps.push_back({{"step", r.step},
                     {"uncovered_count", r.uncovered_count},
                     {"cum_uncertainty", r.cum_uncertainty},
                     {"mean_trace_P", r.mean_trace_P},
                     {"active_uavs", r.active_uavs}});
  }
  doc["steps"] = steps;
  json plans = json::array();
  for (const auto& p : m.plans) {
    plans.push_back({{"step", p.step},
                     {"team", p.team_id},
                     {"vicinity_fires", p.vicinity_fires},
                     {"drones", p.drones},
                     {"feasible", p.feasible},
                     {"t_ub", num(p.t_ub)},
                     {"worst_urr", num(p.worst_urr)},
                     {"bound_confidence", p.bound_confidence}});
  }
  doc["plans"] = plans;
  doc["drones_recruited"] = m.drones_recruited;
  doc["safety_feasible"] = m.safety_feasible;
  json traces = json::object();
  for (const auto& [id, series] : m.trace_series) {
    json s = json::array();
    for (const auto& t : series) s.push_back({t.step, t.trace_P});
    traces[std::to_string(id)] = s;
  }
  doc["trace_series"] = traces;
  os << doc.dump(2) << '\n';
}

void write_sweep_csv(std::ostream& os, const std::vector<SafetySweepRow>& rows) {
  os << "case,teams,trial,min_drones\n";
  for (const auto& r : rows) os << r.fire_case << ',' << r.teams << ',' << r.trial << ',' << r.min_drones << '\n';
}

void write_sweep_summary_csv(std::ostream& os, const std::vector<SweepSummaryRow>& rows) {
  os << "case,teams,mean_min_drones,se\n";
  for (const auto& r : rows) os << r.fire_case << ',' << r.teams << ',' << num(r.mean) << ',' << num(r.se) << '\n';
}

void write_comparison_csv(std::ostream& os, const std::vector<ComparisonRow>& rows) {
  os << "case,controller,drones,trial,cum_uncertainty\n";
  for (const auto& r : rows) {
    os << r.fire_case << ',' << to_string(r.controller) << ',' << r.drones << ',' << r.trial << ','
       << r.cum_uncertainty << '\n';
  }
}

void write_comparison_summary_csv(std::ostream& os, const std::vector<ComparisonSummaryRow>& rows) {
  os << "case,controller,drones,mean_cum_uncertainty,se\n";
  for (const auto& r : rows) {
    os << r.fire_case << ',' << to_string(r.controller) << ',' << r.drones << ',' << num(r.mean) << ','
       << num(r.se) << '\n';
  }
}

}  // namespace firetrack
