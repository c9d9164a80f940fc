#pragma once

#include "rmill/robot_model.hpp"

namespace rmill {

struct SolverSettings {
  int max_iterations = 100;
  double torque_tolerance = 1e-9;  // N*m
  double pose_tolerance = 1e-9;    // m
};

/// A (converged) static equilibrium of the loaded manipulator.
struct LoadedState {
  JointConfig cfg;
  Vector6d wrench = Vector6d::Zero();  // end-point wrench F, N / N*m
  NodeLoading loading;                 // node loadings G at equilibrium
  Pose tcp = Pose::Zero();
  double residual = 0;                 // torque residual norm, N*m
  int iterations = 0;
  std::vector<double> residual_history;
};

/// Equilibrium deflection theta under a prescribed end-point wrench F plus
/// gravity loading. Newton iteration on the torque balance with step
/// halving when the residual grows. `theta0` warm-starts the iteration.
LoadedState solve_equilibrium_for_force(const ManipulatorDescription& model,
                                        const Eigen::VectorXd& q,
                                        const Vector6d& F,
                                        const SolverSettings& settings = {},
                                        const Eigen::VectorXd* theta0 = nullptr);

/// Equilibrium pair (theta, F) that holds the tool end-point at target_t,
/// iterating the linearized force/deflection update with Jacobians and
/// gravity loading refreshed every pass.
LoadedState solve_equilibrium_for_pose(const ManipulatorDescription& model,
                                       const Eigen::VectorXd& q,
                                       const Pose& target_t,
                                       const SolverSettings& settings = {});

/// Cartesian stiffness at a converged equilibrium:
/// K_c = (J_F (K_theta - H)^-1 J_F^T)^-1.
Matrix6d cartesian_stiffness(const ManipulatorDescription& model,
                             const LoadedState& state);

/// Difference target - pose as a 6-vector, with the rotation components
/// differenced on a common rotation-vector branch.
Vector6d pose_delta(const Pose& target, const Pose& pose);

}  // namespace rmill
