#include "rmill/commands.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace rmill {

namespace {

namespace fs = std::filesystem;

double seconds_since(const std::chrono::steady_clock::time_point& start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

std::string out_path(const std::string& out_dir, const char* name) {
  fs::create_directories(out_dir);
  return (fs::path(out_dir) / name).string();
}

}  // namespace

void apply_overrides(Scenario& scenario, const CommandOverrides& overrides) {
  if (overrides.dt > 0) scenario.dt_step = overrides.dt;
  if (overrides.duration > 0) scenario.duration = overrides.duration;
  if (overrides.grid_step > 0) {
    scenario.workpiece.dsx = overrides.grid_step;
    scenario.workpiece.dsy = overrides.grid_step;
  }
}

RunReport cmd_simulate(const std::string& scenario_path,
                       const std::string& out_dir,
                       const CommandOverrides& overrides) {
  const auto start = std::chrono::steady_clock::now();
  ScenarioFile file = load_scenario(scenario_path);
  apply_overrides(file.scenario, overrides);

  SimulationResult result = run_simulation(file.scenario);
  result.trace.scenario_hash = file.hash;

  RunReport report = evaluate_run(file.scenario, file.scenario.path, result);
  report.runtime = seconds_since(start);

  write_trace_csv(result.trace, out_path(out_dir, "trace.csv"));

  const std::vector<double> dev =
      deviation_series(result.trace, file.scenario.path);
  const Window window = fully_engaged_window(file.scenario);
  std::vector<double> dev_window;
  for (std::size_t i = 0; i < result.trace.size(); ++i)
    if (result.trace.tau[i] >= window.t0 && result.trace.tau[i] <= window.t1)
      dev_window.push_back(dev[i]);
  const auto spectrum = amplitude_spectrum(
      dev_window, result.trace.dt, 1.5 * result.trace.tooth_passing_hz);
  write_spectrum_csv(spectrum, file.hash, out_path(out_dir, "spectrum.csv"));

  const auto profile = machined_profile(
      result.grid, path_position(file.scenario.path, 0.0).y(), +1);
  write_profile_csv(profile, file.hash, out_path(out_dir, "profile.csv"));

  write_report_json(report, file.hash, out_path(out_dir, "report.json"));
  return report;
}

CompensatedTrajectory cmd_compensate(const std::string& scenario_path,
                                     const std::string& trace_path,
                                     const std::string& out_dir,
                                     const CommandOverrides& overrides) {
  ScenarioFile file = load_scenario(scenario_path);
  apply_overrides(file.scenario, overrides);
  const SimulationTrace trace = read_trace_csv(trace_path);
  if (trace.scenario_hash != file.hash)
    throw ConfigError("trace was produced from a different scenario file");

  CompensatedTrajectory traj =
      compensate_trajectory(file.scenario.robot, file.scenario, trace,
                            file.controller_period, file.compensation);
  traj.scenario_hash = file.hash;
  write_compensated_csv(traj, out_path(out_dir, "compensated.csv"));

  std::ofstream log(out_path(out_dir, "compensation_log.txt"));
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(file.hash));
  log << "# scenario_fnv1a=" << hash << "\n";
  log << "controller_period " << traj.controller_period << " s\n";
  log << "entry_until " << traj.entry_until << " s\n";
  const double f_low = trace.first_mode_hz;
  if (f_low > 0 && traj.controller_period > 1.0 / (10.0 * f_low))
    log << "warning: controller period undersamples the " << f_low
        << " Hz structural mode\n";
  if (std::fmod(traj.controller_period, trace.dt) > 1e-12)
    log << "note: controller period is not a multiple of the trace step; "
           "samples are linearly interpolated\n";
  for (const auto& p : traj.points)
    log << p.t << " iterations=" << p.iterations << " residual=" << p.residual
        << (p.entry_phase ? " entry" : "") << "\n";
  return traj;
}

ComparisonReport cmd_verify(const std::string& scenario_path,
                            const std::string& compensated_path,
                            const std::string& out_dir,
                            const CommandOverrides& overrides) {
  const auto start = std::chrono::steady_clock::now();
  ScenarioFile file = load_scenario(scenario_path);
  apply_overrides(file.scenario, overrides);
  const CompensatedTrajectory traj = read_compensated_csv(compensated_path);
  if (traj.scenario_hash != file.hash)
    throw ConfigError("trajectory was produced from a different scenario file");

  const std::vector<PathPoint> desired = file.scenario.path;

  SimulationResult before = run_simulation(file.scenario);
  before.trace.scenario_hash = file.hash;
  RunReport report_before = evaluate_run(file.scenario, desired, before);

  Scenario modified = file.scenario;
  modified.path = traj.as_path();
  modified.duration = file.scenario.end_time();
  SimulationResult after = run_simulation(modified);
  after.trace.scenario_hash = file.hash;
  RunReport report_after = evaluate_run(file.scenario, desired, after);

  const double runtime = seconds_since(start);
  report_before.runtime = runtime;
  report_after.runtime = runtime;

  write_trace_csv(after.trace, out_path(out_dir, "trace_compensated.csv"));
  const auto profile_after =
      machined_profile(after.grid, path_position(desired, 0.0).y(), +1);
  write_profile_csv(profile_after, file.hash,
                    out_path(out_dir, "profile_compensated.csv"));
  write_comparison_json(report_before, report_after, file.hash,
                        out_path(out_dir, "comparison.json"));
  return {report_before, report_after};
}

}  // namespace rmill
