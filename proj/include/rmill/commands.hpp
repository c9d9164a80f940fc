#pragma once

#include "rmill/analysis.hpp"
#include "rmill/scenario_io.hpp"
#include "rmill/trace_io.hpp"

#include <string>

namespace rmill {

struct CommandOverrides {
  double dt = 0;         // 0: keep scenario value
  double duration = 0;
  double grid_step = 0;
};

void apply_overrides(Scenario& scenario, const CommandOverrides& overrides);

/// simulate: run the scenario, write trace/spectrum/profile/report files.
RunReport cmd_simulate(const std::string& scenario_path,
                       const std::string& out_dir,
                       const CommandOverrides& overrides = {});

/// compensate: build the modified trajectory from a predicted trace, write
/// the trajectory CSV and a per-point convergence log.
CompensatedTrajectory cmd_compensate(const std::string& scenario_path,
                                     const std::string& trace_path,
                                     const std::string& out_dir,
                                     const CommandOverrides& overrides = {});

struct ComparisonReport {
  RunReport before;
  RunReport after;
};

/// verify: re-simulate with the compensated trajectory and compare the
/// accuracy measures against the nominal run.
ComparisonReport cmd_verify(const std::string& scenario_path,
                            const std::string& compensated_path,
                            const std::string& out_dir,
                            const CommandOverrides& overrides = {});

}  // namespace rmill
