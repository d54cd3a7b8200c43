#pragma once

#include "firetrack/aekf.hpp"
#include "firetrack/fire_dynamics.hpp"
#include "firetrack/gradient_baseline.hpp"
#include "firetrack/safety_bounds.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace firetrack {

enum class Controller { Proposed, Gradient };
enum class FireLayout { Ring, Clusters, Uniform };

struct FireSettings {
  int fire_case = 1;
  std::optional<double> speed;  // planar front speed; defaults 0 / 0.5 / 1 by case
  int initial_count = 30;
  FireLayout layout = FireLayout::Ring;
  double layout_radius = 200.0;
  int clusters = 3;
  double cluster_spread = 60.0;
  int spawn_rate_max = 3;
  int spawn_interval = 10;
  int max_fronts = 60;
  double process_noise = 0.05;
  EllipseParams<double> ellipse{};
  double wind_speed = 5.0;
  double wind_azimuth = 0.7853981633974483;
  std::vector<WindFuelChange> schedule;  // wind_fuel.R is filled in from speed

  double resolved_speed() const;
};

struct TeamSettings {
  int count = 0;
  std::vector<Vector2d> positions;  // generated when shorter than count
  double vicinity_radius = 150.0;
  double standoff = 60.0;  // generated teams sit this far outside the layout radius
};

struct UavSettings {
  int count = 4;
  double speed = 10.0;
  double altitude = 50.0;
  double half_angle = 0.5;
};

struct SensorSettings {
  double angle_noise = 0.002;
  double gps_noise = 1.0;
  double spread_rate_noise = 0.05;
  double wind_speed_noise = 0.2;
  double azimuth_noise = 0.02;
  double detection_noise = 3.0;  // initial hotspot detection error (m)
};

struct FilterSettings {
  double alpha_forget = 0.98;
  NoiseResidual residual = NoiseResidual::PostFit;
  // standard deviations, in state / observation order
  std::vector<double> initial_std{5.0, 5.0, 1.0, 1.0, 1.0, 0.2, 0.5, 0.1};
  std::vector<double> process_std{0.05, 0.05, 1.0, 1.0, 1.0, 0.005, 0.02, 0.005};
  std::vector<double> observation_std{0.002, 0.002, 0.05, 0.2, 0.02};
};

struct ScenarioConfig {
  double area_width = 1000.0;
  double area_height = 1000.0;
  FireSettings fire;
  TeamSettings teams;
  UavSettings uavs;
  SensorSettings sensors;
  FilterSettings filter;
  GradientConfig gradient;
  double alpha_conf = 0.05;
  UrrMode urr_mode = UrrMode::Trace;
  int max_replan_steps = 30;
  int max_safety_recheck_steps = 30;
  int k_opt = 3;
  double dt = 1.0;
  int duration = 500;
  std::uint64_t seed = 1;
  Controller controller = Controller::Proposed;

  FilterConfig<double> filter_config() const;
  CaseTag case_tag() const { return static_cast<CaseTag>(fire.fire_case); }
};

/// Throws ConfigError carrying the offending field path.
void validate(const ScenarioConfig& cfg);

/// Parses a JSON document; unknown keys are errors.
ScenarioConfig parse_config(const std::string& json_text);
ScenarioConfig load_config(const std::string& path);

/// Default speed for a scenario case: 0, 0.5, 1 m/s.
double default_case_speed(int fire_case);

std::string to_string(Controller c);
Controller parse_controller(const std::string& s);

}  // namespace firetrack
