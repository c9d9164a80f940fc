#include "rmill/scenario_io.hpp"

#include "rmill/analysis.hpp"
#include "rmill/se3.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace rmill {

namespace {

using nlohmann::json;

constexpr double kDeg = M_PI / 180.0;

[[noreturn]] void missing(const std::string& field) {
  throw ConfigError("scenario: missing or invalid field '" + field + "'");
}

const json& req(const json& j, const std::string& key,
                const std::string& path) {
  const auto it = j.find(key);
  if (it == j.end()) missing(path.empty() ? key : path + "." + key);
  return *it;
}

double req_num(const json& j, const std::string& key,
               const std::string& path) {
  const json& v = req(j, key, path);
  if (!v.is_number()) missing(path + "." + key);
  return v.get<double>();
}

Eigen::Vector3d vec3(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 3) missing(path);
  return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

Eigen::Vector2d vec2(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2) missing(path);
  return {v[0].get<double>(), v[1].get<double>()};
}

Eigen::VectorXd vecn(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) missing(path);
  Eigen::VectorXd out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i].get<double>();
  return out;
}

ManipulatorDescription parse_robot(const json& j) {
  ManipulatorDescription robot;
  const json& links = req(j, "links", "robot");
  if (!links.is_array() || links.empty()) missing("robot.links");
  for (std::size_t i = 0; i < links.size(); ++i) {
    const json& l = links[i];
    const std::string path = "robot.links[" + std::to_string(i) + "]";
    LinkDescription link;
    link.joint_axis = vec3(req(l, "axis", path), path + ".axis").normalized();
    link.tip_translation =
        vec3(req(l, "translation", path), path + ".translation");
    if (l.contains("rpy_deg")) {
      const Eigen::Vector3d rpy = kDeg * vec3(l["rpy_deg"], path + ".rpy_deg");
      link.tip_rotation =
          (Eigen::AngleAxisd(rpy.z(), Eigen::Vector3d::UnitZ()) *
           Eigen::AngleAxisd(rpy.y(), Eigen::Vector3d::UnitY()) *
           Eigen::AngleAxisd(rpy.x(), Eigen::Vector3d::UnitX()))
              .toRotationMatrix();
    }
    if (l.contains("com_fraction")) link.com_fraction = l["com_fraction"];
    robot.links.push_back(link);
  }

  robot.joint_compliances =
      vecn(req(j, "joint_compliances", "robot"), "robot.joint_compliances");
  const Eigen::VectorXd masses =
      vecn(req(j, "link_masses", "robot"), "robot.link_masses");
  robot.link_masses.assign(masses.data(), masses.data() + masses.size());
  if (j.contains("gravity"))
    robot.gravity = vec3(j["gravity"], "robot.gravity");

  if (j.contains("link_beams")) {
    const json& beams = j["link_beams"];
    for (std::size_t i = 0; i < beams.size(); ++i) {
      const std::string path = "robot.link_beams[" + std::to_string(i) + "]";
      const json& b = beams[i];
      BeamParams beam;
      beam.L = req_num(b, "L", path);
      beam.rho = req_num(b, "rho", path);
      beam.A = req_num(b, "A", path);
      beam.Ip = req_num(b, "Ip", path);
      beam.Iy = req_num(b, "Iy", path);
      beam.Iz = req_num(b, "Iz", path);
      robot.link_beams.push_back(beam);
    }
  }
  return robot;
}

CuttingParams parse_cutting(const json& j) {
  CuttingParams cut;
  cut.k0 = req_num(j, "k0", "cutting");
  cut.hs = req_num(j, "hs", "cutting");
  cut.r = req_num(j, "r", "cutting");
  cut.kr = req_num(j, "kr", "cutting");
  cut.ap = req_num(j, "ap", "cutting");
  if (j.contains("R"))
    cut.R = j["R"].get<double>();
  else
    cut.R = 0.5 * req_num(j, "tool_diameter", "cutting");
  cut.Nz = static_cast<int>(req_num(j, "Nz", "cutting"));
  cut.omega = req_num(j, "omega_rpm", "cutting");
  cut.vf = req_num(j, "vf_m_min", "cutting");
  return cut;
}

std::vector<PathPoint> parse_path(const json& j, const CuttingParams& cut) {
  std::vector<PathPoint> path;
  if (j.contains("points")) {
    for (const auto& p : j["points"]) {
      if (!p.is_array() || p.size() != 3) missing("path.points");
      path.push_back({p[0].get<double>(),
                      Eigen::Vector2d(p[1].get<double>(), p[2].get<double>())});
    }
    return path;
  }
  const Eigen::Vector2d start = vec2(req(j, "start", "path"), "path.start");
  const Eigen::Vector2d dir =
      vec2(req(j, "direction", "path"), "path.direction").normalized();
  const double length = req_num(j, "length", "path");
  const double feed = cut.feed_speed();
  if (feed <= 0) missing("cutting.vf_m_min");
  const double t_cut = length / feed;
  path.push_back({0.0, start});
  path.push_back({t_cut, start + length * dir});
  const double dwell = j.contains("dwell") ? j["dwell"].get<double>() : 0.0;
  if (dwell > 0) path.push_back({t_cut + dwell, start + length * dir});
  return path;
}

}  // namespace

ScenarioFile parse_scenario(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario: JSON parse error: ") + e.what());
  }

  ScenarioFile file;
  file.hash = fnv1a_hash(text);
  Scenario& sc = file.scenario;
  try {
    if (j.contains("name")) sc.name = j["name"].get<std::string>();
    sc.robot = parse_robot(req(j, "robot", ""));
    sc.cutting = parse_cutting(req(j, "cutting", ""));

    if (j.contains("q0_deg"))
      sc.q0 = kDeg * vecn(j["q0_deg"], "q0_deg");
    else
      sc.q0 = vecn(req(j, "q0_rad", ""), "q0_rad");

    sc.path = parse_path(req(j, "path", ""), sc.cutting);

    const json& wp = req(j, "workpiece", "");
    sc.workpiece.bounds_min =
        vec2(req(wp, "bounds_min", "workpiece"), "workpiece.bounds_min");
    sc.workpiece.bounds_max =
        vec2(req(wp, "bounds_max", "workpiece"), "workpiece.bounds_max");
    sc.workpiece.material_min =
        vec2(req(wp, "material_min", "workpiece"), "workpiece.material_min");
    sc.workpiece.material_max =
        vec2(req(wp, "material_max", "workpiece"), "workpiece.material_max");
    if (wp.contains("grid_step")) {
      sc.workpiece.dsx = wp["grid_step"].get<double>();
      sc.workpiece.dsy = sc.workpiece.dsx;
    }

    if (j.contains("sim")) {
      const json& sim = j["sim"];
      if (sim.contains("dt")) sc.dt_step = sim["dt"].get<double>();
      if (sim.contains("duration")) sc.duration = sim["duration"].get<double>();
      if (sim.contains("damping_alpha"))
        sc.damping_alpha = sim["damping_alpha"].get<double>();
      if (sim.contains("damping_beta"))
        sc.damping_beta = sim["damping_beta"].get<double>();
      if (sim.contains("refresh_interval"))
        sc.refresh_interval = sim["refresh_interval"].get<double>();
      if (sim.contains("sanity_bound"))
        sc.sanity_bound = sim["sanity_bound"].get<double>();
      if (sim.contains("planar")) sc.planar = sim["planar"].get<bool>();
    }

    if (j.contains("compensation")) {
      const json& comp = j["compensation"];
      if (comp.contains("controller_period"))
        file.controller_period = comp["controller_period"].get<double>();
      if (comp.contains("alpha"))
        file.compensation.alpha = comp["alpha"].get<double>();
      if (comp.contains("tolerance"))
        file.compensation.tolerance = comp["tolerance"].get<double>();
      if (comp.contains("max_iterations"))
        file.compensation.max_iterations = comp["max_iterations"].get<int>();
      if (comp.contains("lowpass_factor"))
        file.compensation.lowpass_factor = comp["lowpass_factor"].get<double>();
      if (comp.contains("mode"))
        file.compensation.mirror_mode =
            comp["mode"].get<std::string>() == "mirror";
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario: malformed value: ") + e.what());
  }

  sc.validate();
  return file;
}

ScenarioFile load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open scenario file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str());
}

}  // namespace rmill
