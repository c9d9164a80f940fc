#pragma once

#include "rmill/analysis.hpp"
#include "rmill/compensation.hpp"
#include "rmill/dynamic_sim.hpp"

#include <string>

namespace rmill {

/// Trace CSV: a `# key=value` comment header (including the scenario hash)
/// followed by `tau,x_nom,y_nom,dx,dy,Fx,Fy,h_1..h_Nz,engaged_mask` rows.
/// Doubles are printed round-trip exact, so rewriting a read trace is
/// byte-identical.
void write_trace_csv(const SimulationTrace& trace, const std::string& path);
SimulationTrace read_trace_csv(const std::string& path);

void write_spectrum_csv(const std::vector<SpectrumPoint>& spectrum,
                        std::uint64_t scenario_hash, const std::string& path);

void write_profile_csv(const std::vector<ProfilePoint>& profile,
                       std::uint64_t scenario_hash, const std::string& path);

/// Compensated trajectory CSV: `t,x,y,z,vfx,vfy` at the controller period.
void write_compensated_csv(const CompensatedTrajectory& traj,
                           const std::string& path);
CompensatedTrajectory read_compensated_csv(const std::string& path);

void write_report_json(const RunReport& report, std::uint64_t scenario_hash,
                       const std::string& path);

/// Two-column before/after comparison of the accuracy measures.
void write_comparison_json(const RunReport& before, const RunReport& after,
                           std::uint64_t scenario_hash,
                           const std::string& path);

}  // namespace rmill
