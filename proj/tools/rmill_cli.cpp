#include "rmill/commands.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <exception>

namespace {

void print_report(const char* label, const rmill::RunReport& report) {
  std::printf("%s: low_frequency=%.3f Hz  static_deviation=%.6g mm  "
              "max_deviation=%.6g mm\n",
              label, report.low_frequency, report.static_deviation * 1e3,
              report.max_deviation * 1e3);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robotic milling simulator and off-line trajectory compensator"};
  app.require_subcommand(1);

  rmill::CommandOverrides overrides;
  app.add_option("--dt", overrides.dt, "Override the simulation time step, s");
  app.add_option("--duration", overrides.duration,
                 "Override the simulated duration, s");
  app.add_option("--grid-step", overrides.grid_step,
                 "Override the workpiece grid step, m");

  std::string scenario_path, trace_path, trajectory_path, out_dir = ".";

  CLI::App* simulate =
      app.add_subcommand("simulate", "Run the machining simulation");
  simulate->add_option("scenario", scenario_path, "Scenario file")->required();
  simulate->add_option("-o,--out", out_dir, "Output directory");

  CLI::App* compensate = app.add_subcommand(
      "compensate", "Build the modified trajectory from a simulated trace");
  compensate->add_option("scenario", scenario_path, "Scenario file")->required();
  compensate->add_option("trace", trace_path, "Predicted trace CSV")->required();
  compensate->add_option("-o,--out", out_dir, "Output directory");

  CLI::App* verify = app.add_subcommand(
      "verify", "Re-simulate with a compensated trajectory and compare");
  verify->add_option("scenario", scenario_path, "Scenario file")->required();
  verify->add_option("trajectory", trajectory_path, "Compensated trajectory CSV")
      ->required();
  verify->add_option("-o,--out", out_dir, "Output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) {
      const rmill::RunReport report =
          rmill::cmd_simulate(scenario_path, out_dir, overrides);
      print_report("simulate", report);
      std::printf("runtime: %.2f s\n", report.runtime);
    } else if (compensate->parsed()) {
      const rmill::CompensatedTrajectory traj =
          rmill::cmd_compensate(scenario_path, trace_path, out_dir, overrides);
      std::printf("compensate: %zu points at %.4g s period (entry until %.4g s)\n",
                  traj.points.size(), traj.controller_period, traj.entry_until);
    } else if (verify->parsed()) {
      const rmill::ComparisonReport cmp =
          rmill::cmd_verify(scenario_path, trajectory_path, out_dir, overrides);
      print_report("original", cmp.before);
      print_report("modified", cmp.after);
      const auto reduction = [](double a, double b) {
        return a > 0 ? 100.0 * (a - b) / a : 0.0;
      };
      std::printf("reduction: static %.2f%%  max %.2f%%\n",
                  reduction(cmp.before.static_deviation,
                            cmp.after.static_deviation),
                  reduction(cmp.before.max_deviation, cmp.after.max_deviation));
    }
  } catch (const rmill::ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 2;
  } catch (const rmill::NonConvergence& e) {
    std::fprintf(stderr, "solver error: %s (residual %.3g after %d iterations)\n",
                 e.what(), e.residual, e.iterations);
    return 3;
  } catch (const rmill::Instability& e) {
    std::fprintf(stderr, "simulation aborted: %s at t=%.6g s\n", e.what(),
                 e.time);
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
