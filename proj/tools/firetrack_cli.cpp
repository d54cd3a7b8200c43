#include "firetrack/harness.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace firetrack;

namespace {

std::ofstream open_out(const fs::path& dir, const std::string& name) {
  fs::create_directories(dir);
  std::ofstream out(dir / name);
  if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
  return out;
}

ScenarioConfig load(const std::string& path, const std::string& controller) {
  ScenarioConfig cfg = path.empty() ? ScenarioConfig{} : load_config(path);
  if (!controller.empty()) cfg.controller = parse_controller(controller);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wildfire tracking and UAV coordination simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string controller;
  std::string out_dir = "out";

  auto* simulate = app.add_subcommand("simulate", "Run one closed-loop scenario");
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string format = "csv";
  simulate->add_option("--config", config_path, "Scenario JSON file");
  simulate->add_option_function<std::uint64_t>(
      "--seed", [&](const std::uint64_t& s) { seed = s, seed_given = true; }, "Random seed");
  simulate->add_option("--out", out_dir, "Output directory");
  simulate->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  auto* sweep = app.add_subcommand("sweep-safety", "Minimum safety drones versus team count");
  int max_teams = 8;
  int trials = 10;
  sweep->add_option("--config", config_path, "Scenario JSON file");
  sweep->add_option("--max-teams", max_teams, "Largest team count")->check(CLI::PositiveNumber);
  sweep->add_option("--trials", trials, "Trials per cell")->check(CLI::PositiveNumber);
  sweep->add_option("--out", out_dir, "Output directory");

  auto* compare = app.add_subcommand("compare", "Cumulative uncertainty of both controllers");
  std::vector<int> drones{1, 2, 4, 8};
  compare->add_option("--config", config_path, "Scenario JSON file");
  compare->add_option("--drones", drones, "Fleet sizes")->delimiter(',')->check(CLI::PositiveNumber);
  compare->add_option("--trials", trials, "Paired trials per cell")->check(CLI::PositiveNumber);
  compare->add_option("--out", out_dir, "Output directory");

  for (auto* sub : {simulate, sweep, compare}) {
    sub->add_option("--controller", controller, "proposed or gradient")
        ->check(CLI::IsMember({"proposed", "gradient"}));
  }

  CLI11_PARSE(app, argc, argv);

  try {
    ScenarioConfig cfg = load(config_path, controller);
    const fs::path dir(out_dir);

    if (*simulate) {
      if (seed_given) cfg.seed = seed;
      const RunMetrics m = run_scenario(cfg);
      if (format == "json") {
        auto out = open_out(dir, "run.json");
        write_run_json(out, m);
      } else {
        auto steps = open_out(dir, "steps.csv");
        write_steps_csv(steps, m);
        auto plans = open_out(dir, "plans.csv");
        write_plans_csv(plans, m);
        auto traces = open_out(dir, "traces.csv");
        write_traces_csv(traces, m);
      }
      std::cout << "steps=" << m.steps.size() << " cum_uncertainty=" << m.cumulative_uncertainty()
                << " safety_feasible=" << (m.safety_feasible ? "yes" : "no") << '\n';
    } else if (*sweep) {
      const auto rows = sweep_safety(cfg, max_teams, trials);
      auto out = open_out(dir, "safety_sweep.csv");
      write_sweep_csv(out, rows);
      const auto summary = summarize_sweep(rows);
      auto sout = open_out(dir, "safety_summary.csv");
      write_sweep_summary_csv(sout, summary);
      write_sweep_summary_csv(std::cout, summary);
    } else if (*compare) {
      std::vector<Controller> controllers{Controller::Proposed, Controller::Gradient};
      if (!controller.empty()) controllers = {cfg.controller};
      const auto rows = compare_controllers(cfg, drones, trials, controllers);
      auto out = open_out(dir, "comparison.csv");
      write_comparison_csv(out, rows);
      const auto summary = summarize_comparison(rows);
      auto sout = open_out(dir, "comparison_summary.csv");
      write_comparison_summary_csv(sout, summary);
      write_comparison_summary_csv(std::cout, summary);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
