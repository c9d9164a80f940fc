#pragma once

#include "rmill/compensation.hpp"
#include "rmill/dynamic_sim.hpp"

#include <cstdint>
#include <string>

namespace rmill {

struct ScenarioFile {
  Scenario scenario;
  CompensationSettings compensation;
  double controller_period = 0.05;  // s
  std::uint64_t hash = 0;           // FNV-1a of the file bytes
};

/// Parses a scenario file (JSON text, sections robot/cutting/workpiece/
/// path/sim/compensation). Degrees, rpm and m/min fields are converted to
/// SI on load. Throws ConfigError naming the offending field.
ScenarioFile load_scenario(const std::string& path);

ScenarioFile parse_scenario(const std::string& text);

}  // namespace rmill
