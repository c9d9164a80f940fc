#include "rmill/dynamic_sim.hpp"

#include "rmill/se3.hpp"

#include <algorithm>
#include <cmath>

namespace rmill {

NewmarkIntegrator::NewmarkIntegrator(const Eigen::MatrixXd& M,
                                     const Eigen::MatrixXd& C,
                                     const Eigen::MatrixXd& K, double dt_step)
    : M_(M), C_(C), K_(K), dt_(dt_step) {
  if (dt_step <= 0) throw ConfigError("time step must be positive");
  Eigen::FullPivLU<Eigen::MatrixXd> check(M);
  if (!check.isInvertible()) throw SingularMass("mass matrix is singular");
  const Eigen::MatrixXd lhs =
      M_ + 0.5 * dt_ * C_ + 0.25 * dt_ * dt_ * K_;
  lhs_ = Eigen::PartialPivLU<Eigen::MatrixXd>(lhs);
}

DynamicState NewmarkIntegrator::step(const DynamicState& state,
                                     const Eigen::VectorXd& F) const {
  const double h = dt_;
  const Eigen::VectorXd x_pred =
      state.dt + h * state.dv + 0.25 * h * h * state.da;
  const Eigen::VectorXd v_pred = state.dv + 0.5 * h * state.da;
  DynamicState next;
  next.da = lhs_.solve(F - C_ * v_pred - K_ * x_pred);
  next.dv = v_pred + 0.5 * h * next.da;
  next.dt = x_pred + 0.25 * h * h * next.da;
  next.tau = state.tau + h;
  return next;
}

DynamicState integrate_step(const DynamicState& state, const Eigen::MatrixXd& M,
                            const Eigen::MatrixXd& C, const Eigen::MatrixXd& K,
                            const Eigen::VectorXd& F, double dt_step) {
  return NewmarkIntegrator(M, C, K, dt_step).step(state, F);
}

Eigen::Vector2d path_position(const std::vector<PathPoint>& path, double t) {
  if (path.empty()) throw ConfigError("empty trajectory");
  if (t <= path.front().t) return path.front().xy;
  if (t >= path.back().t) return path.back().xy;
  for (std::size_t i = 1; i < path.size(); ++i) {
    if (t <= path[i].t) {
      const double span = path[i].t - path[i - 1].t;
      const double s = span > 0 ? (t - path[i - 1].t) / span : 1.0;
      return path[i - 1].xy + s * (path[i].xy - path[i - 1].xy);
    }
  }
  return path.back().xy;
}

void Scenario::validate() const {
  robot.validate();
  cutting.validate();
  if (path.size() < 2) throw ConfigError("trajectory needs at least two points");
  for (std::size_t i = 1; i < path.size(); ++i)
    if (path[i].t <= path[i - 1].t)
      throw ConfigError("trajectory times must be strictly increasing");
  if (dt_step <= 0) throw ConfigError("sim.dt must be positive");
  if (q0.size() != robot.dof())
    throw ConfigError("q0 dimension does not match the robot");
  if (sanity_bound <= 0) throw ConfigError("sanity bound must be positive");
  const double fz = cutting.feed_per_tooth();
  const double step = workpiece.dsx > 0 ? workpiece.dsx : fz / 8.0;
  if (cutting.feed_speed() * dt_step > step)
    throw ConfigError(
        "sim.dt too large: feed advance per step exceeds the grid step");
}

namespace {

struct ReducedMatrices {
  Eigen::MatrixXd M, C, K;
  double first_mode_hz = 0;
};

// project the 6x6 matrices into the tool plane: rotate into the tool frame,
// then statically condense all but the (x, y) translations
ReducedMatrices reduce_planar(const Matrix6d& M_c, const Matrix6d& K_c,
                              const Eigen::Matrix3d& R_tool, double alpha,
                              double beta) {
  Matrix6d rot = Matrix6d::Zero();
  rot.topLeftCorner<3, 3>() = R_tool;
  rot.bottomRightCorner<3, 3>() = R_tool;
  const Matrix6d K_t = rot.transpose() * K_c * rot;
  const Matrix6d M_t = rot.transpose() * M_c * rot;

  const Eigen::Matrix2d K_mm = K_t.topLeftCorner<2, 2>();
  const Eigen::Matrix<double, 2, 4> K_ms = K_t.topRightCorner<2, 4>();
  const Eigen::Matrix4d K_ss = K_t.bottomRightCorner<4, 4>();
  const Eigen::PartialPivLU<Eigen::Matrix4d> lu(K_ss);
  Eigen::Matrix<double, 6, 2> T;
  T.topRows<2>() = Eigen::Matrix2d::Identity();
  T.bottomRows<4>() = -lu.solve(K_ms.transpose());

  ReducedMatrices out;
  out.K = K_mm - K_ms * lu.solve(K_ms.transpose());
  out.M = T.transpose() * M_t * T;
  out.C = alpha * out.M + beta * out.K;
  return out;
}

ReducedMatrices reduce_full(const Matrix6d& M_c, const Matrix6d& K_c,
                            const Eigen::Matrix3d& R_tool, double alpha,
                            double beta) {
  Matrix6d rot = Matrix6d::Zero();
  rot.topLeftCorner<3, 3>() = R_tool;
  rot.bottomRightCorner<3, 3>() = R_tool;
  ReducedMatrices out;
  out.K = rot.transpose() * K_c * rot;
  out.M = rot.transpose() * M_c * rot;
  out.C = alpha * out.M + beta * out.K;
  return out;
}

double lowest_mode_hz(const Eigen::MatrixXd& K, const Eigen::MatrixXd& M) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> eig(K, M);
  const double lambda = eig.eigenvalues().minCoeff();
  return lambda > 0 ? std::sqrt(lambda) / (2.0 * M_PI) : 0.0;
}

}  // namespace

SimulationResult run_simulation(const Scenario& scenario) {
  scenario.validate();
  const CuttingParams& cut = scenario.cutting;
  const double dt = scenario.dt_step;
  const double t_end = scenario.end_time();
  const int steps = static_cast<int>(std::llround(t_end / dt));
  const int dofs = scenario.planar ? 2 : 6;

  // gravity equilibrium anchors the tool plane: plane coordinates are the
  // tool-frame x, y at the unloaded (process-force-free) start pose
  LoadedState base = solve_equilibrium_for_force(
      scenario.robot, scenario.q0, Vector6d::Zero(), scenario.solver);
  const Eigen::Matrix3d R_tool = se3::rotation_exp(base.tcp.tail<3>());

  const double fz = cut.feed_per_tooth();
  const double dsx = scenario.workpiece.dsx > 0 ? scenario.workpiece.dsx : fz / 8.0;
  const double dsy = scenario.workpiece.dsy > 0 ? scenario.workpiece.dsy : fz / 8.0;
  WorkpieceGrid grid =
      init_grid_rect(scenario.workpiece.bounds_min, scenario.workpiece.bounds_max,
                     dsx, dsy, scenario.workpiece.material_min,
                     scenario.workpiece.material_max);

  auto refresh = [&](const Eigen::Vector2d& mean_force_tool) {
    Vector6d F_base = Vector6d::Zero();
    F_base.head<3>() =
        R_tool * Eigen::Vector3d(mean_force_tool.x(), mean_force_tool.y(), 0.0);
    const LoadedState eq = solve_equilibrium_for_force(
        scenario.robot, scenario.q0, F_base, scenario.solver);
    const Matrix6d K_c = cartesian_stiffness(scenario.robot, eq);
    const Matrix6d M_c = cartesian_mass(scenario.robot, eq);
    ReducedMatrices red =
        scenario.planar
            ? reduce_planar(M_c, K_c, R_tool, scenario.damping_alpha,
                            scenario.damping_beta)
            : reduce_full(M_c, K_c, R_tool, scenario.damping_alpha,
                          scenario.damping_beta);
    red.first_mode_hz = lowest_mode_hz(red.K, red.M);
    return red;
  };

  ReducedMatrices red = refresh(Eigen::Vector2d::Zero());
  NewmarkIntegrator integrator(red.M, red.C, red.K, dt);

  SimulationTrace trace;
  trace.dt = dt;
  trace.Nz = cut.Nz;
  trace.first_mode_hz = red.first_mode_hz;
  trace.tooth_passing_hz = cut.Nz * cut.omega / 60.0;
  const std::size_t rows = static_cast<std::size_t>(steps) + 1;
  trace.tau.reserve(rows);
  trace.nominal.reserve(rows);
  trace.defl.reserve(rows);
  trace.force.reserve(rows);
  trace.chip.reserve(rows);
  trace.engaged.reserve(rows);

  DynamicState state = DynamicState::Zero(dofs);
  Eigen::Vector2d nominal = path_position(scenario.path, 0.0);
  std::vector<double> phi = tooth_positions(cut, 0.0);

  trace.tau.push_back(0.0);
  trace.nominal.push_back(nominal);
  trace.defl.push_back(Eigen::Vector2d::Zero());
  trace.force.push_back(Eigen::Vector2d::Zero());
  trace.chip.push_back(std::vector<double>(cut.Nz, 0.0));
  trace.engaged.push_back(0);

  Eigen::Vector2d force_sum = Eigen::Vector2d::Zero();
  int force_count = 0;
  const int next_refresh = std::max(
      1, scenario.refresh_interval > 0
             ? static_cast<int>(std::llround(scenario.refresh_interval / dt))
             : 1);

  std::vector<ToothState> teeth(cut.Nz);
  for (int k = 0; k < steps; ++k) {
    const double tau_next = (k + 1) * dt;
    const Eigen::Vector2d defl_xy = state.dt.head<2>();
    const Eigen::Vector2d center_prev = nominal + defl_xy;
    const Eigen::Vector2d nominal_next = path_position(scenario.path, tau_next);
    const Eigen::Vector2d center_now = nominal_next + defl_xy;
    const std::vector<double> phi_next = tooth_positions(cut, tau_next);

    std::uint32_t engaged_mask = 0;
    std::vector<double> chips(cut.Nz, 0.0);
    for (int i = 0; i < cut.Nz; ++i) {
      ToothSweep sweep{center_prev, center_now, phi[i], phi_next[i], cut.R};
      const double area = sweep_and_remove(grid, sweep);
      // angular advance referred to the previous tool centre
      const Eigen::Vector2d tip_now =
          center_now + cut.R * tooth_direction(phi_next[i]);
      const Eigen::Vector2d rel = tip_now - center_prev;
      double dphi = wrap_angle(std::atan2(rel.x(), rel.y())) - phi[i];
      if (dphi <= 0) dphi += 2.0 * M_PI;
      const double h = chip_thickness(area, cut.R, dphi);
      teeth[i] = ToothState{i, phi_next[i], h, area > 0.0};
      chips[i] = h;
      if (area > 0.0) engaged_mask |= (1u << i);
    }

    const Eigen::Vector2d fxy = tool_frame_force(teeth, cut);
    force_sum += fxy;
    ++force_count;

    Eigen::VectorXd F = Eigen::VectorXd::Zero(dofs);
    F.head<2>() = fxy;
    state = integrator.step(state, F);

    if (state.dt.head<2>().norm() > scenario.sanity_bound)
      throw Instability("dynamic displacement exceeded the sanity bound",
                        state.tau);

    trace.tau.push_back(tau_next);
    trace.nominal.push_back(nominal_next);
    trace.defl.push_back(state.dt.head<2>());
    trace.force.push_back(fxy);
    trace.chip.push_back(std::move(chips));
    trace.engaged.push_back(engaged_mask);

    nominal = nominal_next;
    phi = phi_next;

    if ((k + 1) % next_refresh == 0 && k + 1 < steps) {
      const Eigen::Vector2d mean =
          force_count > 0 ? Eigen::Vector2d(force_sum / force_count)
                          : Eigen::Vector2d::Zero();
      red = refresh(mean);
      integrator = NewmarkIntegrator(red.M, red.C, red.K, dt);
      force_sum.setZero();
      force_count = 0;
    }
  }

  SimulationResult result{std::move(trace), std::move(grid), red.K, red.M,
                          red.C, base, R_tool};
  return result;
}

}  // namespace rmill
