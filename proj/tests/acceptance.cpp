// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "oracles.hpp"

#include "firetrack/harness.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using namespace firetrack;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string config_path(const std::string& name) { return std::string(FIRETRACK_CONFIG_DIR) + "/" + name; }

// 1. Analytic Jacobians against central differences.
Outcome jacobian_fidelity() {
  const EllipseParams<double> p;
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> pos(0.0, 1000.0), off(-60.0, 60.0), alt(20.0, 120.0), R(0.0, 3.0),
      U(0.5, 15.0), th(0.0, kTwoPi);
  double worst_f = 0.0, worst_h = 0.0;
  for (int i = 0; i < 100; ++i) {
    StateVector<double> s;
    const double qx = pos(rng), qy = pos(rng);
    s << qx, qy, qx + off(rng), qy + off(rng), alt(rng), R(rng), U(rng), th(rng);
    const Vector3d u = s.segment<3>(idx::px);
    const auto f = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
      return state_transition<double>(StateVector<double>(x), u, 1.0, p);
    };
    const auto h = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
      return observe<double>(StateVector<double>(x));
    };
    worst_f = std::max(worst_f, oracle::max_relative_error(transition_jacobian(s, 1.0, p), oracle::central_jacobian(f, s)));
    worst_h = std::max(worst_h, oracle::max_relative_error(observation_jacobian(s), oracle::central_jacobian(h, s)));
  }
  return {worst_f < 1e-4 && worst_h < 1e-4,
          "max rel err F=" + fmt("%.2e", worst_f) + " H=" + fmt("%.2e", worst_h) + " over 100 states"};
}

// 2. Bound self-consistency.
Outcome bound_consistency() {
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> mst(0.0, 500.0), zeta(0.0, 0.6), v(5.0, 20.0), g(10.0, 100.0);
  std::uniform_int_distribution<int> n(1, 8);
  int checked = 0, ordered = 0, limit_ok = 0, root_ok = 0;
  while (checked < 1000) {
    BoundInputs in;
    in.mst_cost = mst(rng);
    in.n_fires = n(rng);
    in.zeta_alpha = zeta(rng);
    in.fov_width = g(rng);
    const FleetParams f{v(rng), 50.0, 0.5};
    const auto c1 = t_ub_case1(in, f), c2 = t_ub_case2(in, f), c3 = t_ub_case3(in, f);
    if (!(c1.feasible && c2.feasible && c3.feasible)) continue;
    ++checked;
    if (c1.t_ub <= c2.t_ub * (1 + 1e-12) && c2.t_ub <= c3.t_ub * (1 + 1e-12)) ++ordered;
    if (std::abs(case3_fixed_point_residual(c3.t_ub, in, f)) <= 1e-9 * std::max(1.0, c3.t_ub)) ++root_ok;
    BoundInputs tiny = in;
    tiny.zeta_alpha = 1e-8;
    const double t2 = t_ub_case2(tiny, f).t_ub;
    if (c1.t_ub == 0.0 ? t2 == 0.0 : std::abs(t2 - c1.t_ub) / c1.t_ub <= 1e-6) ++limit_ok;
  }
  return {ordered == 1000 && root_ok == 1000 && limit_ok == 1000,
          "ordered " + std::to_string(ordered) + "/1000, fixed point " + std::to_string(root_ok) +
              "/1000, zero-speed limit " + std::to_string(limit_ok) + "/1000"};
}

// 3. URR guarantee in closed loop: a single UAV tracks a small moving
// cluster, plans a tour when the feasibility test passes, flies it for the
// certified horizon and compares the realized residual trace to the start.
struct UrrTrial {
  bool tested = false;
  bool exceeded = false;
  int fires = 0;
  int fires_exceeded = 0;
};

UrrTrial urr_trial(std::uint64_t seed) {
  ScenarioConfig cfg = with_case(ScenarioConfig{}, 2);
  const FilterConfig<double> fc = cfg.filter_config();
  const EllipseParams<double> ellipse;
  Rng rng(mix64(seed));
  std::normal_distribution<double> n01(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> count(2, 6);

  FireMap map;
  map.fire_case = FireCase::Moving;
  map.wind_fuel = {spread_rate_for_speed(0.5, 5.0, ellipse), 5.0, kTwoPi * unit(rng)};
  map.process_noise = cfg.fire.process_noise;
  map.rng_seed = mix64(seed ^ 0x5eedULL);
  map.max_fronts = 60;
  const Vector2d center(500.0, 500.0);
  const int n = count(rng);
  for (int i = 0; i < n; ++i) {
    const double r = 60.0 * std::sqrt(unit(rng)), a = kTwoPi * unit(rng);
    FireFront f;
    f.id = i;
    f.q = center + r * Vector2d(std::cos(a), std::sin(a));
    f.qdot = front_velocity(map.wind_fuel, ellipse);
    map.fronts.push_back(f);
  }
  map.next_id = n;

  std::vector<Track> tracks;
  for (const auto& f : map.fronts) {
    StateVector<double> s;
    s << f.q.x() + cfg.sensors.detection_noise * n01(rng), f.q.y() + cfg.sensors.detection_noise * n01(rng),
        center.x(), center.y(), cfg.uavs.altitude, map.wind_fuel.R + cfg.sensors.spread_rate_noise * n01(rng),
        map.wind_fuel.U + cfg.sensors.wind_speed_noise * n01(rng),
        wrap_two_pi(map.wind_fuel.theta + cfg.sensors.azimuth_noise * n01(rng));
    s[idx::R] = std::max(0.0, s[idx::R]);
    tracks.push_back(make_track(f.id, s, fc, 0));
  }

  UavAgent uav;
  uav.pose = Vector3d(center.x(), center.y(), cfg.uavs.altitude);
  SafetyContext ctx{CaseTag::C2, cfg.alpha_conf, 1.0, ellipse, UrrMode::Trace, cfg.k_opt};

  auto step_once = [&]() {
    map = simulate_step(map, ellipse, 1.0);
    advance_along_route(uav, 1.0);
    const Vector3d gps = uav.pose + cfg.sensors.gps_noise * Vector3d(n01(rng), n01(rng), n01(rng));
    const auto seen = fires_in_view(uav, map.fronts);
    for (auto& t : tracks) {
      if (std::find(seen.begin(), seen.end(), t.id) == seen.end()) {
        t = predict(t, 1.0, ellipse);
        continue;
      }
      StateVector<double> truth;
      truth << map.fronts[t.id].q, uav.pose, map.wind_fuel.R, map.wind_fuel.U, map.wind_fuel.theta;
      ObservationVector<double> z = observe(truth);
      z[0] += cfg.sensors.angle_noise * n01(rng);
      z[1] += cfg.sensors.angle_noise * n01(rng);
      z[2] += cfg.sensors.spread_rate_noise * n01(rng);
      z[3] += cfg.sensors.wind_speed_noise * n01(rng);
      z[4] = wrap_two_pi(z[4] + cfg.sensors.azimuth_noise * n01(rng));
      const Track predicted = predict(t, gps, 1.0, ellipse);
      try {
        t = update_and_adapt(predicted, z, fc).track;
      } catch (const SingularResidual&) {
        t = predicted;
      }
    }
  };

  uav.route = urr_feasibility_test(tracks, uav.fleet(), ctx).route();
  for (int k = 0; k < 40; ++k) step_once();

  UrrTrial out;
  const auto test = urr_feasibility_test(tracks, uav.fleet(), ctx);
  if (!test.pass) return out;
  out.tested = true;
  std::vector<double> before;
  for (const auto& t : tracks) before.push_back(multi_step_predict(t, 1).S.trace());
  uav.route = test.route();
  uav.route_index = 0;
  const int r = horizon_steps(test.bound.t_ub, 1.0);
  for (int k = 0; k < r; ++k) step_once();
  for (std::size_t i = 0; i < tracks.size(); ++i) {
    ++out.fires;
    if (multi_step_predict(tracks[i], 1).S.trace() > before[i]) {
      out.exceeded = true;
      ++out.fires_exceeded;
    }
  }
  return out;
}

Outcome urr_guarantee() {
  int tested = 0, exceeded = 0, attempts = 0, fires = 0, fires_exceeded = 0;
  while (tested < 500 && attempts < 20000) {
    const auto t = urr_trial(static_cast<std::uint64_t>(attempts) + 1);
    ++attempts;
    if (!t.tested) continue;
    ++tested;
    if (t.exceeded) ++exceeded;
    fires += t.fires;
    fires_exceeded += t.fires_exceeded;
  }
  const double rate = tested > 0 ? static_cast<double>(exceeded) / tested : 1.0;
  return {tested >= 500 && rate <= 0.07,
          std::to_string(exceeded) + "/" + std::to_string(tested) + " passing runs exceeded (" +
              fmt("%.1f%%", 100.0 * rate) + ", limit 7%), per fire " + std::to_string(fires_exceeded) + "/" +
              std::to_string(fires) + ", " + std::to_string(attempts) + " runs drawn"};
}

// 4. Tour construction suite.
Outcome tsp_suite() {
  std::mt19937_64 rng(404);
  int double_tree = 0, monotone = 0, near_opt = 0, mst_ok = 0;
  for (int i = 0; i < 200; ++i) {
    const int n = 3 + i % 7;  // 3..9
    const auto pts = oracle::random_points(rng, n, 500.0);
    const auto mst = build_mst(pts);
    const auto tour = tour_from_mst(pts, mst);
    if (tour.length <= 2.0 * mst.length + 1e-9) ++double_tree;
    const auto two = k_opt_improve(tour, pts, 2);
    if (two.length <= tour.length + 1e-9) ++monotone;
    if (two.length <= 2.0 * oracle::exhaustive_tsp(pts) + 1e-9) ++near_opt;
    if (n <= 8 && std::abs(mst.length - oracle::exhaustive_mst(pts)) <= 1e-9 * std::max(1.0, mst.length)) ++mst_ok;
  }
  int small = 0;
  for (int i = 0; i < 200; ++i) small += (3 + i % 7) <= 8;
  return {double_tree == 200 && monotone == 200 && near_opt == 200 && mst_ok == small,
          "2xMST " + std::to_string(double_tree) + "/200, 2-opt monotone " + std::to_string(monotone) +
              "/200, within 2x optimum " + std::to_string(near_opt) + "/200, exact MST " + std::to_string(mst_ok) +
              "/" + std::to_string(small)};
}

// 5. Minimum safety drones versus team count and case.
Outcome safety_sweep() {
  const ScenarioConfig base = load_config(config_path("sweep.json"));
  const auto rows = sweep_safety(base, 8, 10);
  const auto summary = summarize_sweep(rows);
  std::map<std::pair<int, int>, double> mean;
  for (const auto& s : summary) mean[{s.fire_case, s.teams}] = s.mean;
  std::map<int, int> capped;
  for (const auto& r : rows) capped[r.fire_case] += r.min_drones > safety_pool_cap(base, r.teams);
  bool ok = true;
  std::ostringstream table;
  for (int c = 1; c <= 3; ++c) {
    table << " case" << c << ":";
    for (int t = 1; t <= 8; ++t) {
      table << ' ' << fmt("%.1f", mean[{c, t}]);
      if (t > 1 && mean[{c, t}] < mean[{c, t - 1}]) ok = false;
      if (c > 1 && mean[{c, t}] < mean[{c - 1, t}]) ok = false;
    }
  }
  table << "; trials with no feasible pool up to the cap (reported as cap + 1):";
  for (int c = 1; c <= 3; ++c) table << " case" << c << ' ' << capped[c] << "/80";
  return {ok, "mean min drones, teams 1..8," + table.str()};
}

// 6 and 7 share one comparison run.
std::vector<ComparisonRow>& comparison_rows() {
  static std::vector<ComparisonRow> rows = [] {
    const ScenarioConfig base = load_config(config_path("compare.json"));
    return compare_controllers(base, {1, 2, 4, 8}, 10);
  }();
  return rows;
}

Outcome fleet_size_trend() {
  const auto summary = summarize_comparison(comparison_rows());
  bool ok = true;
  std::ostringstream table;
  for (int c = 1; c <= 3; ++c) {
    table << " case" << c << ":";
    double prev = std::numeric_limits<double>::infinity();
    for (const auto& s : summary) {
      if (s.fire_case != c || s.controller != Controller::Proposed) continue;
      table << ' ' << fmt("%.0f", s.mean);
      if (!(s.mean < prev)) ok = false;
      prev = s.mean;
    }
  }
  return {ok, "proposed mean cumulative uncertainty, 1/2/4/8 UAVs," + table.str()};
}

Outcome controller_comparison() {
  const int drones = 4;
  bool ok = true;
  std::ostringstream detail;
  for (int c = 1; c <= 3; ++c) {
    std::map<int, double> proposed, gradient;
    for (const auto& r : comparison_rows()) {
      if (r.fire_case != c || r.drones != drones) continue;
      (r.controller == Controller::Proposed ? proposed : gradient)[r.trial] = static_cast<double>(r.cum_uncertainty);
    }
    std::vector<double> a, b;
    for (const auto& [trial, v] : proposed) {
      a.push_back(v);
      b.push_back(gradient.at(trial));
    }
    const auto t = paired_t_test_less(a, b);
    if (!(mean_of(a) < mean_of(b) && t.p_value < 0.05)) ok = false;
    detail << " case" << c << ": " << fmt("%.0f", mean_of(a)) << " vs " << fmt("%.0f", mean_of(b))
           << " p=" << fmt("%.2g", t.p_value);
  }
  return {ok, "proposed vs gradient at 4 UAVs, 10 paired seeds," + detail.str()};
}

// 8. Filter sanity.
Outcome filter_sanity() {
  const EllipseParams<double> p;
  // (a) zero noise, exact pose and observations, stationary fire
  StateVector<double> truth;
  truth << 420.0, 515.0, 430.0, 500.0, 50.0, 0.0, 5.0, 0.8;
  const Vector3d pose = truth.segment<3>(idx::px);
  const auto noise_free_error = [&](double alpha_forget) {
    FilterConfig<double> exact;
    exact.alpha_forget = alpha_forget;
    exact.P0 = StateMatrix<double>::Zero();
    exact.P0.diagonal() << 25, 25, 1e-6, 1e-6, 1e-6, 0.04, 0.25, 0.01;
    exact.Q0 = StateMatrix<double>::Zero();
    exact.Q0.diagonal() << 1e-2, 1e-2, 0, 0, 0, 1e-4, 1e-4, 1e-4;  // keeps the gain from collapsing
    exact.R0 = ObservationMatrix<double>::Identity() * 1e-8;
    StateVector<double> start = truth;
    start[idx::qx] += 4.0;
    start[idx::qy] -= 3.0;
    start[idx::U] += 0.3;
    start[idx::theta] += 0.05;
    Track t = make_track(0, start, exact, 0);
    for (int k = 0; k < 50; ++k) {
      const Track predicted = predict(t, pose, 1.0, p);
      try {
        t = update_and_adapt(predicted, observe(truth), exact).track;
      } catch (const SingularResidual&) {
        t = predicted;
      }
    }
    return (t.position() - truth.head<2>()).norm();
  };
  // the noise statistics are known to be zero, so adaptation is frozen
  const double err = noise_free_error(1.0);
  const double err_adaptive = noise_free_error(0.98);

  // (b) noisy stationary system: adapted observation noise against the truth
  ScenarioConfig defaults;
  const ObservationVector<double> sd(defaults.sensors.angle_noise, defaults.sensors.angle_noise,
                                     defaults.sensors.spread_rate_noise, defaults.sensors.wind_speed_noise,
                                     defaults.sensors.azimuth_noise);
  const double true_trace = sd.squaredNorm();
  FilterConfig<double> fc = defaults.filter_config();
  Rng rng(808);
  std::normal_distribution<double> n01(0.0, 1.0);
  StateVector<double> guess = truth;
  guess[idx::qx] += 3.0;
  guess[idx::qy] += 3.0;
  Track noisy = make_track(0, guess, fc, 0);
  for (int k = 0; k < 500; ++k) {
    ObservationVector<double> z = observe(truth);
    for (int i = 0; i < kObsDim; ++i) z[i] += sd[i] * n01(rng);
    const Track predicted = predict(noisy, pose, 1.0, p);
    try {
      noisy = update_and_adapt(predicted, z, fc).track;
    } catch (const SingularResidual&) {
      noisy = predicted;
    }
  }
  const double rel = std::abs(noisy.R_obs.trace() - true_trace) / true_trace;
  return {err < 1e-6 && rel <= 0.25, "noise-free position error " + fmt("%.2e", err) + " m (" + fmt("%.2e", err_adaptive) +
                                         " m with adaptation on); adapted R trace " +
                                         fmt("%.4g", noisy.R_obs.trace()) + " vs " + fmt("%.4g", true_trace) + " (" +
                                         fmt("%.1f%%", 100.0 * rel) + ")"};
}

// 9. CLI determinism.
std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

bool same_tree(const fs::path& a, const fs::path& b, int& files) {
  for (const auto& e : fs::directory_iterator(a)) {
    const fs::path other = b / e.path().filename();
    if (!fs::exists(other) || slurp(e.path()) != slurp(other)) return false;
    ++files;
  }
  return files > 0;
}

Outcome cli_determinism() {
  const fs::path root = fs::temp_directory_path() / "firetrack_acceptance";
  fs::remove_all(root);
  const std::string cli = FIRETRACK_CLI;
  const std::string smoke = config_path("smoke.json");
  const std::vector<std::pair<std::string, std::string>> commands{
      {"simulate_csv", "simulate --config " + smoke + " --seed 7 --format csv"},
      {"simulate_json", "simulate --config " + smoke + " --seed 7 --format json"},
      {"sweep", "sweep-safety --config " + smoke + " --max-teams 2 --trials 2"},
      {"compare", "compare --config " + smoke + " --drones 1,2 --trials 2"},
  };
  int files = 0;
  for (const auto& [name, args] : commands) {
    for (const char* run : {"a", "b"}) {
      const fs::path out = root / name / run;
      const std::string cmd = cli + " " + args + " --out " + out.string() + " > /dev/null";
      if (std::system(cmd.c_str()) != 0) return {false, "command failed: " + cmd};
    }
    if (!same_tree(root / name / "a", root / name / "b", files)) return {false, name + " outputs differ"};
  }
  fs::remove_all(root);
  return {true, std::to_string(files) + " output files byte-identical across repeated runs of 4 commands"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 Jacobian fidelity", jacobian_fidelity},
      {"2 Bound self-consistency", bound_consistency},
      {"3 URR guarantee", urr_guarantee},
      {"4 Tour construction", tsp_suite},
      {"5 Safety drones vs teams and case", safety_sweep},
      {"6 Uncertainty vs fleet size", fleet_size_trend},
      {"7 Proposed vs gradient baseline", controller_comparison},
      {"8 Filter sanity", filter_sanity},
      {"9 CLI determinism", cli_determinism},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << name << "  [" << fmt("%.1f", secs) << " s]  " << o.detail
              << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
