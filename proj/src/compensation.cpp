#include "rmill/compensation.hpp"

#include "rmill/se3.hpp"

#include <algorithm>
#include <cmath>

namespace rmill {

Eigen::VectorXd gravity_anchored_ik(const ManipulatorDescription& model,
                                    const Eigen::VectorXd& q_seed,
                                    const Pose& anchor,
                                    const SolverSettings& settings) {
  Eigen::VectorXd q = q_seed;
  for (int iter = 0; iter < settings.max_iterations; ++iter) {
    const LoadedState eq =
        solve_equilibrium_for_force(model, q, Vector6d::Zero(), settings);
    const Vector6d delta = pose_delta(anchor, eq.tcp);
    if (delta.head<3>().norm() <= settings.pose_tolerance &&
        delta.tail<3>().norm() <= settings.pose_tolerance)
      return q;
    // pose moves with q like it moves with theta (coaxial joints)
    const Eigen::MatrixXd J = node_jacobian(model, eq.cfg, kTcp);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(J);
    if (!lu.isInvertible())
      throw SingularJacobian("tool Jacobian is singular in anchored IK");
    q += lu.solve(delta);
  }
  throw NonConvergence("anchored IK did not converge", 0.0,
                       settings.max_iterations);
}

Pose loaded_pose(const ManipulatorDescription& model,
                 const Eigen::VectorXd& q_seed, const Vector6d& F,
                 const Pose& anchor, const SolverSettings& settings) {
  const Eigen::VectorXd q_cmd =
      gravity_anchored_ik(model, q_seed, anchor, settings);
  return solve_equilibrium_for_force(model, q_cmd, F, settings).tcp;
}

TargetPoint solve_modified_target(const ManipulatorDescription& model,
                                  const Eigen::VectorXd& q, const Pose& t0,
                                  const Vector6d& F, double alpha,
                                  const CompensationSettings& settings) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw ConfigError("compensation alpha must lie in (0, 1]");

  TargetPoint point;
  point.t0 = t0;
  point.wrench = F;
  point.t0_mod = t0;

  for (int iter = 1; iter <= settings.max_iterations; ++iter) {
    const Pose landed =
        loaded_pose(model, q, F, point.t0_mod, settings.equilibrium);
    const Vector6d update = alpha * pose_delta(t0, landed);
    point.t0_mod += update;
    point.iterations = iter;
    point.residual = update.norm();
    if (point.residual <= settings.tolerance) return point;
  }
  throw NonConvergence(
      "modified-target iteration did not converge; try a smaller alpha",
      point.residual, settings.max_iterations);
}

namespace {

// forward-backward second-order Butterworth low-pass (zero phase)
std::vector<double> biquad_lowpass_zero_phase(const std::vector<double>& x,
                                              double dt, double cutoff_hz) {
  if (x.size() < 3 || cutoff_hz <= 0) return x;
  const double nyquist = 0.5 / dt;
  if (cutoff_hz >= 0.95 * nyquist) return x;

  const double w = std::tan(M_PI * cutoff_hz * dt);
  const double k = std::sqrt(2.0);
  const double norm = 1.0 / (1.0 + k * w + w * w);
  const double b0 = w * w * norm;
  const double b1 = 2.0 * b0;
  const double b2 = b0;
  const double a1 = 2.0 * (w * w - 1.0) * norm;
  const double a2 = (1.0 - k * w + w * w) * norm;

  auto pass = [&](const std::vector<double>& in) {
    std::vector<double> out(in.size());
    double x1 = in[0], x2 = in[0];
    double y1 = in[0], y2 = in[0];
    for (std::size_t i = 0; i < in.size(); ++i) {
      const double y = b0 * in[i] + b1 * x1 + b2 * x2 - a1 * y1 - a2 * y2;
      x2 = x1;
      x1 = in[i];
      y2 = y1;
      y1 = y;
      out[i] = y;
    }
    return out;
  };

  std::vector<double> forward = pass(x);
  std::reverse(forward.begin(), forward.end());
  std::vector<double> backward = pass(forward);
  std::reverse(backward.begin(), backward.end());
  return backward;
}

std::vector<double> centered_moving_average(const std::vector<double>& x,
                                            int half_width) {
  if (half_width < 1) return x;
  const int n = static_cast<int>(x.size());
  std::vector<double> prefix(n + 1, 0.0);
  for (int i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + x[i];
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) {
    const int lo = std::max(0, i - half_width);
    const int hi = std::min(n - 1, i + half_width);
    out[i] = (prefix[hi + 1] - prefix[lo]) / (hi - lo + 1);
  }
  return out;
}

}  // namespace

std::vector<double> quasi_static_component(const std::vector<double>& samples,
                                           double dt, double comb_period,
                                           double cutoff_hz) {
  const int half_width =
      std::max(1, static_cast<int>(std::llround(0.5 * comb_period / dt)));
  return biquad_lowpass_zero_phase(
      centered_moving_average(samples, half_width), dt, cutoff_hz);
}

std::vector<PathPoint> CompensatedTrajectory::as_path() const {
  std::vector<PathPoint> path;
  path.reserve(points.size());
  for (const auto& p : points) path.push_back({p.t, p.xy});
  return path;
}

CompensatedTrajectory compensate_trajectory(const ManipulatorDescription& model,
                                            const Scenario& scenario,
                                            const SimulationTrace& trace,
                                            double controller_period,
                                            const CompensationSettings& settings) {
  if (trace.size() < 2) throw ConfigError("trace is empty");
  if (controller_period < trace.dt)
    throw ConfigError("controller period must be at least the trace step");

  const double duration = trace.tau.back();
  const double f_low = trace.first_mode_hz;

  // entry phase: from first tooth contact until the tool centre has
  // advanced one radius into the stock
  const double feed = scenario.cutting.feed_speed();
  const double entry_until =
      feed > 0 ? std::min(duration,
                          (scenario.workpiece.material_min.x() +
                           scenario.cutting.R - trace.nominal.front().x()) /
                              feed)
               : 0.0;

  std::vector<double> dx(trace.size()), dy(trace.size());
  for (std::size_t i = 0; i < trace.size(); ++i) {
    dx[i] = trace.defl[i].x();
    dy[i] = trace.defl[i].y();
  }
  const double cutoff = settings.lowpass_factor * f_low;
  const std::vector<double> qx = quasi_static_component(
      dx, trace.dt, scenario.cutting.tooth_period(), cutoff);
  const std::vector<double> qy = quasi_static_component(
      dy, trace.dt, scenario.cutting.tooth_period(), cutoff);

  auto sample = [&](const std::vector<double>& v, double t) {
    const double s = t / trace.dt;
    const auto lo = static_cast<std::size_t>(
        std::clamp<double>(std::floor(s), 0, static_cast<double>(v.size() - 1)));
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    const double frac = s - static_cast<double>(lo);
    return v[lo] + frac * (v[hi] - v[lo]);
  };

  // plane coordinates sit on the gravity equilibrium: plane origin at the
  // start pose, axes along the tool frame
  const LoadedState base = solve_equilibrium_for_force(
      model, scenario.q0, Vector6d::Zero(), settings.equilibrium);
  const Eigen::Matrix3d R_tool = se3::rotation_exp(base.tcp.tail<3>());
  const Eigen::Vector2d plane0 = trace.nominal.front();

  // stiffness at the base equilibrium converts predicted deflections into
  // predicted wrenches for the nonlinear target solve
  const Matrix6d K_c = cartesian_stiffness(model, base);
  Matrix6d rot = Matrix6d::Zero();
  rot.topLeftCorner<3, 3>() = R_tool;
  rot.bottomRightCorner<3, 3>() = R_tool;
  const Matrix6d K_tool = rot.transpose() * K_c * rot;

  auto plane_to_pose = [&](const Eigen::Vector2d& xy) {
    Pose t = base.tcp;
    t.head<3>() += R_tool * Eigen::Vector3d(xy.x() - plane0.x(),
                                            xy.y() - plane0.y(), 0.0);
    return t;
  };

  CompensatedTrajectory out;
  out.controller_period = controller_period;
  out.entry_until = entry_until;
  out.scenario_hash = trace.scenario_hash;

  const int samples =
      static_cast<int>(std::floor(duration / controller_period)) + 1;
  out.points.reserve(samples);
  for (int m = 0; m < samples; ++m) {
    const double t = m * controller_period;
    const Eigen::Vector2d nominal_xy = path_position(scenario.path, t);
    const Eigen::Vector2d defl_qs(sample(qx, t), sample(qy, t));

    CompensatedPoint point;
    point.t = t;
    point.entry_phase = t < entry_until;
    if (settings.mirror_mode) {
      point.xy = nominal_xy - defl_qs;
    } else {
      Vector6d defl6 = Vector6d::Zero();
      defl6.head<2>() = defl_qs;
      const Vector6d F_pred = rot * (K_tool * defl6);
      const TargetPoint solved =
          solve_modified_target(model, scenario.q0, plane_to_pose(nominal_xy),
                                F_pred, settings.alpha, settings);
      const Eigen::Vector3d offset =
          R_tool.transpose() *
          (solved.t0_mod.head<3>() - solved.t0.head<3>());
      point.xy = nominal_xy + offset.head<2>();
      point.iterations = solved.iterations;
      point.residual = solved.residual;
    }
    out.points.push_back(point);
  }

  // per-segment feed rates
  for (std::size_t m = 0; m + 1 < out.points.size(); ++m) {
    out.points[m].feed = (out.points[m + 1].xy - out.points[m].xy) /
                         controller_period;
  }
  if (out.points.size() >= 2)
    out.points.back().feed = out.points[out.points.size() - 2].feed;

  return out;
}

}  // namespace rmill
