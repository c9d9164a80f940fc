#pragma once

#include "rmill/dynamic_sim.hpp"

#include <vector>

namespace rmill {

struct CompensationSettings {
  double alpha = 0.5;        // relaxation of the target update, (0, 1]
  double tolerance = 1e-8;   // m, stop when the update norm falls below
  int max_iterations = 50;
  SolverSettings equilibrium;
  double lowpass_factor = 2.0;  // deflection low-pass cutoff, x first mode
  bool mirror_mode = false;     // offset by -deflection instead of solving
};

/// One compensated target: commanded location t0_mod such that the loaded
/// equilibrium lands the tool on the desired t0.
struct TargetPoint {
  Pose t0 = Pose::Zero();
  Vector6d wrench = Vector6d::Zero();
  Pose t0_mod = Pose::Zero();
  int iterations = 0;
  double residual = 0;  // m
};

/// Actuator command whose gravity-loaded (process-force-free) equilibrium
/// puts the tool end-point at `anchor`. Newton on q.
Eigen::VectorXd gravity_anchored_ik(const ManipulatorDescription& model,
                                    const Eigen::VectorXd& q_seed,
                                    const Pose& anchor,
                                    const SolverSettings& settings = {});

/// Loaded end-point location under wrench F when the commanded (unloaded)
/// target is `anchor`: re-anchors the chain via gravity_anchored_ik and
/// solves the equilibrium under F.
Pose loaded_pose(const ManipulatorDescription& model,
                 const Eigen::VectorXd& q_seed, const Vector6d& F,
                 const Pose& anchor, const SolverSettings& settings = {});

/// Fixed-point iteration t0_mod += alpha * (t0 - loaded_pose(F | t0_mod))
/// starting from t0_mod = t0.
TargetPoint solve_modified_target(const ManipulatorDescription& model,
                                  const Eigen::VectorXd& q, const Pose& t0,
                                  const Vector6d& F, double alpha,
                                  const CompensationSettings& settings = {});

struct CompensatedPoint {
  double t = 0;
  Eigen::Vector2d xy = Eigen::Vector2d::Zero();
  Eigen::Vector2d feed = Eigen::Vector2d::Zero();  // segment feed rate, m/s
  bool entry_phase = false;
  int iterations = 0;
  double residual = 0;
};

struct CompensatedTrajectory {
  std::vector<CompensatedPoint> points;
  double controller_period = 0;
  double entry_until = 0;  // s, tool-engagement transient end
  std::uint64_t scenario_hash = 0;

  std::vector<PathPoint> as_path() const;
};

/// Builds the modified trajectory: low-passes the predicted deflection at
/// the controller bandwidth, mirrors it through the nonlinear target solve
/// (or directly in mirror mode) and resamples at the controller period.
CompensatedTrajectory compensate_trajectory(const ManipulatorDescription& model,
                                            const Scenario& scenario,
                                            const SimulationTrace& trace,
                                            double controller_period,
                                            const CompensationSettings& settings = {});

/// Zero-phase quasi-static extraction used by the compensator: a centred
/// moving average one comb period wide (nulls the tooth-passing ripple)
/// followed by a forward-backward biquad low-pass at `cutoff_hz`.
std::vector<double> quasi_static_component(const std::vector<double>& samples,
                                           double dt, double comb_period,
                                           double cutoff_hz);

}  // namespace rmill
