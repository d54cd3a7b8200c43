#include "firetrack/scenario.hpp"

#include "json.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace firetrack {

namespace {

using nlohmann::json;

// Reads typed fields from one JSON object and rejects keys nobody asked for.
class Section {
 public:
  Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  bool has(const std::string& key) {
    seen_.insert(key);
    return node_.contains(key);
  }

  template <typename T>
  void read(const std::string& key, T& out) {
    if (!has(key)) return;
    try {
      out = node_.at(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigError(field(key), "wrong type");
    }
  }

  const json& at(const std::string& key) const { return node_.at(key); }

  Section child(const std::string& key) {
    seen_.insert(key);
    return Section(node_.at(key), field(key));
  }

  void finish() const {
    for (auto it = node_.begin(); it != node_.end(); ++it) {
      if (!seen_.count(it.key())) throw ConfigError(field(it.key()), "unknown key");
    }
  }

 private:
  const json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

Vector2d read_point(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ConfigError(path, "expected [x, y]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

void read_vector(Section& s, const std::string& key, std::vector<double>& out, std::size_t size) {
  if (!s.has(key)) return;
  const json& j = s.at(key);
  if (!j.is_array() || j.size() != size) {
    throw ConfigError(s.field(key), "expected " + std::to_string(size) + " numbers");
  }
  out.clear();
  for (const auto& v : j) {
    if (!v.is_number()) throw ConfigError(s.field(key), "expected numbers");
    out.push_back(v.get<double>());
  }
}

void parse_ellipse(Section s, EllipseParams<double>& e) {
  s.read("a", e.a);
  s.read("b", e.b);
  s.read("c", e.c);
  s.read("d", e.d);
  s.read("l", e.l);
  s.finish();
}

void parse_fire(Section s, FireSettings& f) {
  s.read("case", f.fire_case);
  if (s.has("speed")) {
    double v = 0.0;
    s.read("speed", v);
    f.speed = v;
  }
  s.read("initial_count", f.initial_count);
  if (s.has("layout")) {
    std::string name;
    s.read("layout", name);
    if (name == "ring") f.layout = FireLayout::Ring;
    else if (name == "clusters") f.layout = FireLayout::Clusters;
    else if (name == "uniform") f.layout = FireLayout::Uniform;
    else throw ConfigError(s.field("layout"), "expected ring, clusters or uniform");
  }
  s.read("layout_radius", f.layout_radius);
  s.read("clusters", f.clusters);
  s.read("cluster_spread", f.cluster_spread);
  s.read("spawn_rate_max", f.spawn_rate_max);
  s.read("spawn_interval", f.spawn_interval);
  s.read("max_fronts", f.max_fronts);
  s.read("process_noise", f.process_noise);
  if (s.has("ellipse")) parse_ellipse(s.child("ellipse"), f.ellipse);
  if (s.has("wind")) {
    Section w = s.child("wind");
    w.read("speed", f.wind_speed);
    w.read("azimuth", f.wind_azimuth);
    if (w.has("schedule")) {
      const json& arr = w.at("schedule");
      if (!arr.is_array()) throw ConfigError(w.field("schedule"), "expected an array");
      f.schedule.clear();
      for (std::size_t i = 0; i < arr.size(); ++i) {
        Section e(arr[i], w.field("schedule") + "[" + std::to_string(i) + "]");
        WindFuelChange c;
        c.wind_fuel = {0.0, f.wind_speed, f.wind_azimuth};
        e.read("step", c.step);
        e.read("speed", c.wind_fuel.U);
        e.read("azimuth", c.wind_fuel.theta);
        e.finish();
        f.schedule.push_back(c);
      }
    }
    w.finish();
  }
  s.finish();
}

void parse_teams(Section s, TeamSettings& t) {
  s.read("count", t.count);
  if (s.has("positions")) {
    const json& arr = s.at("positions");
    if (!arr.is_array()) throw ConfigError(s.field("positions"), "expected an array");
    t.positions.clear();
    for (std::size_t i = 0; i < arr.size(); ++i) {
      t.positions.push_back(read_point(arr[i], s.field("positions") + "[" + std::to_string(i) + "]"));
    }
  }
  s.read("vicinity_radius", t.vicinity_radius);
  s.read("standoff", t.standoff);
  s.finish();
}

void parse_uavs(Section s, UavSettings& u) {
  s.read("count", u.count);
  s.read("speed", u.speed);
  s.read("altitude", u.altitude);
  s.read("half_angle", u.half_angle);
  s.finish();
}

void parse_sensors(Section s, SensorSettings& n) {
  s.read("angle_noise", n.angle_noise);
  s.read("gps_noise", n.gps_noise);
  s.read("spread_rate_noise", n.spread_rate_noise);
  s.read("wind_speed_noise", n.wind_speed_noise);
  s.read("azimuth_noise", n.azimuth_noise);
  s.read("detection_noise", n.detection_noise);
  s.finish();
}

void parse_filter(Section s, FilterSettings& f) {
  s.read("alpha_forget", f.alpha_forget);
  if (s.has("residual")) {
    std::string name;
    s.read("residual", name);
    if (name == "post_fit") f.residual = NoiseResidual::PostFit;
    else if (name == "innovation") f.residual = NoiseResidual::Innovation;
    else throw ConfigError(s.field("residual"), "expected post_fit or innovation");
  }
  read_vector(s, "initial_std", f.initial_std, kStateDim);
  read_vector(s, "process_std", f.process_std, kStateDim);
  read_vector(s, "observation_std", f.observation_std, kObsDim);
  s.finish();
}

void parse_gradient(Section s, GradientConfig& g) {
  s.read("step_size", g.step_size);
  s.read("separation_weight", g.separation_weight);
  s.read("separation_radius", g.separation_radius);
  s.read("sensing_range", g.sensing_range);
  s.read("min_altitude", g.min_altitude);
  s.read("max_altitude", g.max_altitude);
  s.finish();
}

void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw ConfigError(field, what);
}

bool positive(double v) { return std::isfinite(v) && v > 0.0; }
bool nonnegative(double v) { return std::isfinite(v) && v >= 0.0; }

}  // namespace

double default_case_speed(int fire_case) {
  switch (fire_case) {
    case 1: return 0.0;
    case 2: return 0.5;
    case 3: return 1.0;
    default: throw ConfigError("fire.case", "expected 1, 2 or 3");
  }
}

double FireSettings::resolved_speed() const { return speed ? *speed : default_case_speed(fire_case); }

FilterConfig<double> ScenarioConfig::filter_config() const {
  FilterConfig<double> fc;
  fc.alpha_forget = filter.alpha_forget;
  fc.dt = dt;
  fc.residual = filter.residual;
  fc.ellipse = fire.ellipse;
  StateVector<double> p0, q0;
  ObservationVector<double> r0;
  for (int i = 0; i < kStateDim; ++i) {
    p0(i) = filter.initial_std[i] * filter.initial_std[i];
    q0(i) = filter.process_std[i] * filter.process_std[i];
  }
  for (int i = 0; i < kObsDim; ++i) r0(i) = filter.observation_std[i] * filter.observation_std[i];
  fc.P0 = p0.asDiagonal();
  fc.Q0 = q0.asDiagonal();
  fc.R0 = r0.asDiagonal();
  return fc;
}

void validate(const ScenarioConfig& c) {
  require(positive(c.area_width), "area.width", "must be positive");
  require(positive(c.area_height), "area.height", "must be positive");
  require(c.fire.fire_case >= 1 && c.fire.fire_case <= 3, "fire.case", "expected 1, 2 or 3");
  if (c.fire.speed) {
    require(nonnegative(*c.fire.speed), "fire.speed", "must be non-negative");
    require(c.fire.fire_case != 1 || *c.fire.speed == 0.0, "fire.speed", "case 1 fires are stationary");
    require(c.fire.fire_case == 1 || *c.fire.speed > 0.0, "fire.speed", "moving cases need a positive speed");
  }
  require(c.fire.initial_count >= 0, "fire.initial_count", "must be non-negative");
  require(positive(c.fire.layout_radius), "fire.layout_radius", "must be positive");
  require(c.fire.clusters >= 1, "fire.clusters", "must be at least 1");
  require(nonnegative(c.fire.cluster_spread), "fire.cluster_spread", "must be non-negative");
  require(c.fire.spawn_rate_max >= 0, "fire.spawn_rate_max", "must be non-negative");
  require(c.fire.fire_case != 3 || c.fire.spawn_rate_max >= 1, "fire.spawn_rate_max",
          "case 3 needs at least one spawn per event");
  require(c.fire.spawn_interval >= 1, "fire.spawn_interval", "must be at least 1");
  require(c.fire.max_fronts >= c.fire.initial_count, "fire.max_fronts", "must be at least initial_count");
  require(nonnegative(c.fire.process_noise), "fire.process_noise", "must be non-negative");
  require(nonnegative(c.fire.wind_speed), "fire.wind.speed", "must be non-negative");
  require(std::isfinite(c.fire.wind_azimuth), "fire.wind.azimuth", "must be finite");
  for (std::size_t i = 0; i < c.fire.schedule.size(); ++i) {
    const auto& s = c.fire.schedule[i];
    const std::string base = "fire.wind.schedule[" + std::to_string(i) + "]";
    require(s.step >= 0, base + ".step", "must be non-negative");
    require(i == 0 || s.step > c.fire.schedule[i - 1].step, base + ".step", "must be increasing");
    require(nonnegative(s.wind_fuel.U), base + ".speed", "must be non-negative");
  }
  try {
    if (length_to_breadth(c.fire.wind_speed, c.fire.ellipse) < 1.0 - 1e-9) {
      throw ConfigError("fire.ellipse", "length-to-breadth ratio below 1 at the configured wind");
    }
  } catch (const DomainError&) {
    throw ConfigError("fire.ellipse", "length-to-breadth ratio below 1 at the configured wind");
  }

  require(c.teams.count >= 0, "teams.count", "must be non-negative");
  require(positive(c.teams.vicinity_radius), "teams.vicinity_radius", "must be positive");
  require(nonnegative(c.teams.standoff), "teams.standoff", "must be non-negative");

  require(c.uavs.count >= 0, "uavs.count", "must be non-negative");
  require(positive(c.uavs.speed), "uavs.speed", "must be positive");
  require(positive(c.uavs.altitude), "uavs.altitude", "must be positive");
  require(c.uavs.half_angle > 0.0 && c.uavs.half_angle < kPi / 2.0, "uavs.half_angle", "must lie in (0, pi/2)");

  require(nonnegative(c.sensors.angle_noise), "sensors.angle_noise", "must be non-negative");
  require(nonnegative(c.sensors.gps_noise), "sensors.gps_noise", "must be non-negative");
  require(nonnegative(c.sensors.spread_rate_noise), "sensors.spread_rate_noise", "must be non-negative");
  require(nonnegative(c.sensors.wind_speed_noise), "sensors.wind_speed_noise", "must be non-negative");
  require(nonnegative(c.sensors.azimuth_noise), "sensors.azimuth_noise", "must be non-negative");
  require(nonnegative(c.sensors.detection_noise), "sensors.detection_noise", "must be non-negative");

  require(c.filter.alpha_forget >= 0.0 && c.filter.alpha_forget <= 1.0, "filter.alpha_forget",
          "must lie in [0, 1]");
  for (double v : c.filter.initial_std) require(nonnegative(v), "filter.initial_std", "must be non-negative");
  for (double v : c.filter.process_std) require(nonnegative(v), "filter.process_std", "must be non-negative");
  for (double v : c.filter.observation_std) {
    require(positive(v), "filter.observation_std", "must be positive");
  }

  require(positive(c.gradient.step_size), "gradient.step_size", "must be positive");
  require(nonnegative(c.gradient.separation_weight), "gradient.separation_weight", "must be non-negative");
  require(nonnegative(c.gradient.separation_radius), "gradient.separation_radius", "must be non-negative");
  require(nonnegative(c.gradient.sensing_range), "gradient.sensing_range", "must be non-negative");
  require(nonnegative(c.gradient.min_altitude), "gradient.min_altitude", "must be non-negative");
  require(nonnegative(c.gradient.max_altitude), "gradient.max_altitude", "must be non-negative");

  require(c.alpha_conf > 0.0 && c.alpha_conf < 1.0, "alpha_conf", "must lie in (0, 1)");
  require(c.max_replan_steps >= 1, "coverage.max_replan_steps", "must be at least 1");
  require(c.max_safety_recheck_steps >= 1, "safety.max_recheck_steps", "must be at least 1");
  require(c.k_opt == 2 || c.k_opt == 3, "routing.k_opt", "expected 2 or 3");
  require(positive(c.dt), "dt", "must be positive");
  require(c.duration >= 1, "duration", "must be at least 1");
}

ScenarioConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<root>", std::string("malformed JSON: ") + e.what());
  }

  ScenarioConfig c;
  Section root(doc, "");
  if (root.has("area")) {
    Section a = root.child("area");
    a.read("width", c.area_width);
    a.read("height", c.area_height);
    a.finish();
  }
  if (root.has("fire")) parse_fire(root.child("fire"), c.fire);
  if (root.has("teams")) parse_teams(root.child("teams"), c.teams);
  if (root.has("uavs")) parse_uavs(root.child("uavs"), c.uavs);
  if (root.has("sensors")) parse_sensors(root.child("sensors"), c.sensors);
  if (root.has("filter")) parse_filter(root.child("filter"), c.filter);
  if (root.has("gradient")) parse_gradient(root.child("gradient"), c.gradient);
  if (root.has("coverage")) {
    Section s = root.child("coverage");
    s.read("max_replan_steps", c.max_replan_steps);
    s.finish();
  }
  if (root.has("safety")) {
    Section s = root.child("safety");
    s.read("max_recheck_steps", c.max_safety_recheck_steps);
    if (s.has("urr_mode")) {
      std::string name;
      s.read("urr_mode", name);
      if (name == "trace") c.urr_mode = UrrMode::Trace;
      else if (name == "max_eigenvalue") c.urr_mode = UrrMode::MaxEigenvalue;
      else throw ConfigError(s.field("urr_mode"), "expected trace or max_eigenvalue");
    }
    s.finish();
  }
  if (root.has("routing")) {
    Section s = root.child("routing");
    s.read("k_opt", c.k_opt);
    s.finish();
  }
  root.read("alpha_conf", c.alpha_conf);
  root.read("dt", c.dt);
  root.read("duration", c.duration);
  root.read("seed", c.seed);
  if (root.has("controller")) {
    std::string name;
    root.read("controller", name);
    try {
      c.controller = parse_controller(name);
    } catch (const std::invalid_argument&) {
      throw ConfigError("controller", "expected proposed or gradient");
    }
  }
  root.finish();
  validate(c);
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string to_string(Controller c) { return c == Controller::Proposed ? "proposed" : "gradient"; }

Controller parse_controller(const std::string& s) {
  if (s == "proposed") return Controller::Proposed;
  if (s == "gradient") return Controller::Gradient;
  throw std::invalid_argument("unknown controller: " + s);
}

}  // namespace firetrack
