#include "rmill/trace_io.hpp"

#include <json.hpp>

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace rmill {

namespace {

struct File {
  std::FILE* f;
  explicit File(const std::string& path) : f(std::fopen(path.c_str(), "wb")) {
    if (!f) throw ConfigError("cannot open for writing: " + path);
  }
  ~File() {
    if (f) std::fclose(f);
  }
  File(const File&) = delete;
  File& operator=(const File&) = delete;
};

// round-trip exact, locale-independent
void put_num(std::FILE* f, double v) { std::fprintf(f, "%.17g", v); }

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace

void write_trace_csv(const SimulationTrace& trace, const std::string& path) {
  File file(path);
  std::fprintf(file.f, "# scenario_fnv1a=%016" PRIx64 "\n", trace.scenario_hash);
  std::fprintf(file.f, "# dt=%.17g\n", trace.dt);
  std::fprintf(file.f, "# Nz=%d\n", trace.Nz);
  std::fprintf(file.f, "# first_mode_hz=%.17g\n", trace.first_mode_hz);
  std::fprintf(file.f, "# tooth_passing_hz=%.17g\n", trace.tooth_passing_hz);
  std::fprintf(file.f, "tau,x_nom,y_nom,dx,dy,Fx,Fy");
  for (int i = 1; i <= trace.Nz; ++i) std::fprintf(file.f, ",h_%d", i);
  std::fprintf(file.f, ",engaged_mask\n");
  for (std::size_t row = 0; row < trace.size(); ++row) {
    put_num(file.f, trace.tau[row]);
    for (double v : {trace.nominal[row].x(), trace.nominal[row].y(),
                     trace.defl[row].x(), trace.defl[row].y(),
                     trace.force[row].x(), trace.force[row].y()}) {
      std::fputc(',', file.f);
      put_num(file.f, v);
    }
    for (double h : trace.chip[row]) {
      std::fputc(',', file.f);
      put_num(file.f, h);
    }
    std::fprintf(file.f, ",%u\n", trace.engaged[row]);
  }
}

SimulationTrace read_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open trace file: " + path);
  SimulationTrace trace;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = line.substr(2, eq - 2);
      const std::string value = line.substr(eq + 1);
      if (key == "scenario_fnv1a")
        trace.scenario_hash = std::stoull(value, nullptr, 16);
      else if (key == "dt")
        trace.dt = std::stod(value);
      else if (key == "Nz")
        trace.Nz = std::stoi(value);
      else if (key == "first_mode_hz")
        trace.first_mode_hz = std::stod(value);
      else if (key == "tooth_passing_hz")
        trace.tooth_passing_hz = std::stod(value);
      continue;
    }
    if (!header_seen) {  // column header row
      header_seen = true;
      continue;
    }
    const auto fields = split(line, ',');
    if (fields.size() != static_cast<std::size_t>(8 + trace.Nz))
      throw ConfigError("trace row has unexpected column count");
    trace.tau.push_back(std::stod(fields[0]));
    trace.nominal.emplace_back(std::stod(fields[1]), std::stod(fields[2]));
    trace.defl.emplace_back(std::stod(fields[3]), std::stod(fields[4]));
    trace.force.emplace_back(std::stod(fields[5]), std::stod(fields[6]));
    std::vector<double> chips(trace.Nz);
    for (int i = 0; i < trace.Nz; ++i) chips[i] = std::stod(fields[7 + i]);
    trace.chip.push_back(std::move(chips));
    trace.engaged.push_back(
        static_cast<std::uint32_t>(std::stoul(fields[7 + trace.Nz])));
  }
  if (trace.size() == 0) throw ConfigError("trace file holds no rows");
  return trace;
}

void write_spectrum_csv(const std::vector<SpectrumPoint>& spectrum,
                        std::uint64_t scenario_hash, const std::string& path) {
  File file(path);
  std::fprintf(file.f, "# scenario_fnv1a=%016" PRIx64 "\n", scenario_hash);
  std::fprintf(file.f, "frequency_hz,amplitude\n");
  for (const auto& pt : spectrum) {
    put_num(file.f, pt.frequency);
    std::fputc(',', file.f);
    put_num(file.f, pt.amplitude);
    std::fputc('\n', file.f);
  }
}

void write_profile_csv(const std::vector<ProfilePoint>& profile,
                       std::uint64_t scenario_hash, const std::string& path) {
  File file(path);
  std::fprintf(file.f, "# scenario_fnv1a=%016" PRIx64 "\n", scenario_hash);
  std::fprintf(file.f, "x,y\n");
  for (const auto& pt : profile) {
    put_num(file.f, pt.x);
    std::fputc(',', file.f);
    put_num(file.f, pt.y);
    std::fputc('\n', file.f);
  }
}

void write_compensated_csv(const CompensatedTrajectory& traj,
                           const std::string& path) {
  File file(path);
  std::fprintf(file.f, "# scenario_fnv1a=%016" PRIx64 "\n", traj.scenario_hash);
  std::fprintf(file.f, "# controller_period=%.17g\n", traj.controller_period);
  std::fprintf(file.f, "# entry_until=%.17g\n", traj.entry_until);
  std::fprintf(file.f, "t,x,y,z,vfx,vfy\n");
  for (const auto& p : traj.points) {
    put_num(file.f, p.t);
    for (double v : {p.xy.x(), p.xy.y(), 0.0, p.feed.x(), p.feed.y()}) {
      std::fputc(',', file.f);
      put_num(file.f, v);
    }
    std::fputc('\n', file.f);
  }
}

CompensatedTrajectory read_compensated_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open trajectory file: " + path);
  CompensatedTrajectory traj;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = line.substr(2, eq - 2);
      const std::string value = line.substr(eq + 1);
      if (key == "scenario_fnv1a")
        traj.scenario_hash = std::stoull(value, nullptr, 16);
      else if (key == "controller_period")
        traj.controller_period = std::stod(value);
      else if (key == "entry_until")
        traj.entry_until = std::stod(value);
      continue;
    }
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    const auto fields = split(line, ',');
    if (fields.size() != 6)
      throw ConfigError("trajectory row has unexpected column count");
    CompensatedPoint p;
    p.t = std::stod(fields[0]);
    p.xy = {std::stod(fields[1]), std::stod(fields[2])};
    p.feed = {std::stod(fields[4]), std::stod(fields[5])};
    p.entry_phase = p.t < traj.entry_until;
    traj.points.push_back(p);
  }
  if (traj.points.empty()) throw ConfigError("trajectory file holds no rows");
  return traj;
}

namespace {

nlohmann::json report_to_json(const RunReport& report) {
  nlohmann::json j;
  j["low_frequency_hz"] = report.low_frequency;
  j["static_deviation_m"] = report.static_deviation;
  j["max_deviation_m"] = report.max_deviation;
  j["runtime_s"] = report.runtime;
  for (const auto& [key, value] : report.diagnostics) j["diagnostics"][key] = value;
  return j;
}

}  // namespace

void write_report_json(const RunReport& report, std::uint64_t scenario_hash,
                       const std::string& path) {
  nlohmann::json j = report_to_json(report);
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016" PRIx64, scenario_hash);
  j["scenario_fnv1a"] = hash;
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open for writing: " + path);
  out << j.dump(2) << "\n";
}

void write_comparison_json(const RunReport& before, const RunReport& after,
                           std::uint64_t scenario_hash,
                           const std::string& path) {
  nlohmann::json j;
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016" PRIx64, scenario_hash);
  j["scenario_fnv1a"] = hash;
  j["original"] = report_to_json(before);
  j["modified"] = report_to_json(after);
  const auto reduction = [](double a, double b) {
    return a > 0 ? 100.0 * (a - b) / a : 0.0;
  };
  j["reduction_percent"]["static_deviation"] =
      reduction(before.static_deviation, after.static_deviation);
  j["reduction_percent"]["max_deviation"] =
      reduction(before.max_deviation, after.max_deviation);
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open for writing: " + path);
  out << j.dump(2) << "\n";
}

}  // namespace rmill
