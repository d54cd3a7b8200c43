#pragma once

#include "firetrack/coordination.hpp"
#include "firetrack/scenario.hpp"

#include <map>
#include <ostream>
#include <vector>

namespace firetrack {

struct StepRecord {
  int step = 0;
  int uncovered_count = 0;
  long long cum_uncertainty = 0;
  double mean_trace_P = 0.0;
  int active_uavs = 0;
};

struct PlanRecord {
  int step = 0;
  int team_id = 0;
  int vicinity_fires = 0;
  int drones = 0;
  bool feasible = true;
  double t_ub = 0.0;
  double worst_urr = 0.0;
  double bound_confidence = 1.0;
};

struct TraceSample {
  int step = 0;
  double trace_P = 0.0;
};

struct RunMetrics {
  std::vector<StepRecord> steps;
  std::map<int, std::vector<TraceSample>> trace_series;  // by fire id
  std::vector<int> drones_recruited;                     // per team, peak over the run
  std::vector<PlanRecord> plans;
  std::vector<double> wall_clock_ms;  // per step; never written to output files
  bool safety_feasible = true;        // every safety plan of the run was feasible
  int peak_safety_drones = 0;         // most UAVs simultaneously in safety mode

  long long cumulative_uncertainty() const { return steps.empty() ? 0 : steps.back().cum_uncertainty; }
};

/// Closed-loop run: fire step, observations, filter, controllers, metrics.
RunMetrics run_scenario(const ScenarioConfig& cfg);

/// Initial scenario geometry, exposed for tests.
std::vector<FireFront> initial_fronts(const ScenarioConfig& cfg);
std::vector<UavAgent> initial_uavs(const ScenarioConfig& cfg);
std::vector<HumanTeam> initial_teams(const ScenarioConfig& cfg);

/// Copy of base with the case set and the case's default speed.
ScenarioConfig with_case(const ScenarioConfig& base, int fire_case);
/// Seed used for trial k of a sweep.
std::uint64_t trial_seed(const ScenarioConfig& base, int trial);

struct SafetySweepRow {
  int fire_case = 1;
  int teams = 1;
  int trial = 0;
  int min_drones = 0;
};

struct SweepSummaryRow {
  int fire_case = 1;
  int teams = 1;
  double mean = 0.0;
  double se = 0.0;
};

/// Smallest UAV pool for which every safety plan of the run stays feasible.
/// The peak demand of a run with a generous pool seeds an upward scan; runs
/// that need more than `pool_cap` UAVs report pool_cap + 1.
int min_safety_drones(const ScenarioConfig& cfg, int pool_cap);
/// Largest pool tried for a given team count; a cell above it never became feasible.
int safety_pool_cap(const ScenarioConfig& base, int teams);

std::vector<SafetySweepRow> sweep_safety(const ScenarioConfig& base, int max_teams, int trials,
                                         const std::vector<int>& cases = {1, 2, 3});
std::vector<SweepSummaryRow> summarize_sweep(const std::vector<SafetySweepRow>& rows);

struct ComparisonRow {
  int fire_case = 1;
  Controller controller = Controller::Proposed;
  int drones = 1;
  int trial = 0;
  long long cum_uncertainty = 0;
};

struct ComparisonSummaryRow {
  int fire_case = 1;
  Controller controller = Controller::Proposed;
  int drones = 1;
  double mean = 0.0;
  double se = 0.0;
};

std::vector<ComparisonRow> compare_controllers(const ScenarioConfig& base, const std::vector<int>& drones, int trials,
                                               const std::vector<Controller>& controllers = {Controller::Proposed,
                                                                                             Controller::Gradient},
                                               const std::vector<int>& cases = {1, 2, 3});
std::vector<ComparisonSummaryRow> summarize_comparison(const std::vector<ComparisonRow>& rows);

/// One-sided paired t-test of H1: mean(a - b) < 0.
struct PairedTest {
  int n = 0;
  double mean_difference = 0.0;
  double t_statistic = 0.0;
  double p_value = 1.0;
};
PairedTest paired_t_test_less(const std::vector<double>& a, const std::vector<double>& b);

double mean_of(const std::vector<double>& v);
double standard_error(const std::vector<double>& v);

void write_steps_csv(std::ostream& os, const RunMetrics& m);
void write_plans_csv(std::ostream& os, const RunMetrics& m);
void write_traces_csv(std::ostream& os, const RunMetrics& m);
void write_run_json(std::ostream& os, const RunMetrics& m);
void write_sweep_csv(std::ostream& os, const std::vector<SafetySweepRow>& rows);
void write_sweep_summary_csv(std::ostream& os, const std::vector<SweepSummaryRow>& rows);
void write_comparison_csv(std::ostream& os, const std::vector<ComparisonRow>& rows);
void write_comparison_summary_csv(std::ostream& os, const std::vector<ComparisonSummaryRow>& rows);

}  // namespace firetrack
