#include "rmill/elastostatics.hpp"

#include "rmill/se3.hpp"

#include <cmath>

namespace rmill {

namespace {

constexpr double kConditionLimit = 1e12;
constexpr int kMaxHalvings = 10;

Pose node_pose_near(const ManipulatorDescription& model, const JointConfig& cfg,
                    const Eigen::Vector3d& rot_ref) {
  const FrameChain chain = compute_frames(model, cfg);
  return se3::pose_from_transform_near(chain.node_frames.back(), rot_ref);
}

// solve M x = b with a condition estimate; throws on near-singularity
struct CheckedSolver {
  Eigen::FullPivLU<Eigen::MatrixXd> lu;
  CheckedSolver(const Eigen::MatrixXd& M, const char* what) : lu(M) {
    if (!lu.isInvertible() || lu.rcond() < 1.0 / kConditionLimit)
      throw SingularMatrix(what);
  }
  Eigen::MatrixXd solve(const Eigen::MatrixXd& b) const { return lu.solve(b); }
};

}  // namespace

Vector6d pose_delta(const Pose& target, const Pose& pose) {
  Vector6d d;
  d.head<3>() = target.head<3>() - pose.head<3>();
  const Eigen::Matrix3d R = se3::rotation_exp(pose.tail<3>());
  const Eigen::Vector3d rv = se3::rotation_log_near(R, target.tail<3>());
  d.tail<3>() = target.tail<3>() - rv;
  return d;
}

LoadedState solve_equilibrium_for_force(const ManipulatorDescription& model,
                                        const Eigen::VectorXd& q,
                                        const Vector6d& F,
                                        const SolverSettings& settings,
                                        const Eigen::VectorXd* theta0) {
  model.validate();
  const Eigen::VectorXd k_theta = model.joint_stiffness();

  JointConfig cfg = JointConfig::Rigid(q);
  if (theta0) cfg.theta = *theta0;
  NodeLoading G = gravity_loading(model, cfg);
  Eigen::VectorXd residual =
      k_theta.asDiagonal() * cfg.theta - loading_torque(model, cfg, F, G);
  double res_norm = residual.norm();

  LoadedState out;
  out.residual_history.push_back(res_norm);

  for (int iter = 1; iter <= settings.max_iterations; ++iter) {
    if (res_norm <= settings.torque_tolerance) {
      out.cfg = cfg;
      out.wrench = F;
      out.loading = G;
      out.tcp = forward_kinematics(model, cfg);
      out.residual = res_norm;
      out.iterations = iter - 1;
      return out;
    }

    const Eigen::MatrixXd H = loading_hessian(model, cfg, F, G);
    const Eigen::MatrixXd tangent = Eigen::MatrixXd(k_theta.asDiagonal()) - H;
    const CheckedSolver solver(tangent, "K_theta - H is numerically singular");
    const Eigen::VectorXd step = -solver.solve(residual);

    // full Newton step, halved while the residual grows
    double scale = 1.0;
    JointConfig trial = cfg;
    Eigen::VectorXd trial_res;
    double trial_norm = 0;
    for (int halving = 0;; ++halving) {
      trial.theta = cfg.theta + scale * step;
      const NodeLoading Gt = gravity_loading(model, trial);
      trial_res = k_theta.asDiagonal() * trial.theta -
                  loading_torque(model, trial, F, Gt);
      trial_norm = trial_res.norm();
      if (trial_norm < res_norm || halving >= kMaxHalvings) {
        G = Gt;
        break;
      }
      scale *= 0.5;
    }
    cfg = trial;
    residual = trial_res;
    res_norm = trial_norm;
    out.residual_history.push_back(res_norm);
  }
  throw NonConvergence("equilibrium-for-force did not converge", res_norm,
                       settings.max_iterations);
}

LoadedState solve_equilibrium_for_pose(const ManipulatorDescription& model,
                                       const Eigen::VectorXd& q,
                                       const Pose& target_t,
                                       const SolverSettings& settings) {
  model.validate();
  const int n = model.dof();
  const Eigen::VectorXd compliance = model.joint_compliances;
  const Eigen::Vector3d rot_ref = target_t.tail<3>();

  // nested scheme: the outer loop updates the wrench from the linearized
  // pose relation, the inner Newton restores the exact torque balance
  Vector6d F = Vector6d::Zero();
  LoadedState state = solve_equilibrium_for_force(model, q, F, settings);
  double err_norm =
      pose_delta(target_t, node_pose_near(model, state.cfg, rot_ref)).norm();

  LoadedState out;
  out.residual_history.push_back(err_norm);

  for (int iter = 1; iter <= settings.max_iterations; ++iter) {
    if (err_norm <= settings.pose_tolerance) {
      out.cfg = state.cfg;
      out.wrench = F;
      out.loading = state.loading;
      out.tcp = state.tcp;
      out.residual = state.residual;
      out.iterations = iter - 1;
      return out;
    }

    const Eigen::MatrixXd stack = node_jacobian_stack(model, state.cfg);
    const Eigen::MatrixXd J = stack.bottomRows<6>();  // J_theta^(F)
    const Pose pose = node_pose_near(model, state.cfg, rot_ref);
    const Eigen::VectorXd tau_g = stack.transpose() * state.loading.G;
    const Vector6d rhs = pose_delta(target_t, pose) + J * state.cfg.theta -
                         J * (compliance.asDiagonal() * tau_g);
    const Matrix6d JCJt = J * compliance.asDiagonal() * J.transpose();

    // full-pose-capable chains get a strict solve; short chains fall back
    // to the minimum-norm least-squares wrench
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(JCJt);
    cod.setThreshold(1e-13);
    const bool rank_deficient = cod.rank() < 6;
    if (n >= 6 && rank_deficient)
      throw SingularJacobian("J K_theta^-1 J^T is numerically singular");
    const Vector6d F_next = cod.solve(rhs);

    // step halving on the pose error, re-equilibrating for each trial
    double scale = 1.0;
    for (int halving = 0;; ++halving) {
      const Vector6d F_trial = F + scale * (F_next - F);
      bool solved = false;
      LoadedState trial;
      try {
        trial = solve_equilibrium_for_force(model, q, F_trial, settings,
                                            &state.cfg.theta);
        solved = true;
      } catch (const NonConvergence&) {
      }
      double trial_err = err_norm + 1.0;
      if (solved)
        trial_err =
            pose_delta(target_t, node_pose_near(model, trial.cfg, rot_ref))
                .norm();
      if ((solved && trial_err < err_norm) || halving >= kMaxHalvings) {
        if (!solved)
          throw NonConvergence("equilibrium-for-pose inner solve failed",
                               err_norm, iter);
        // a stagnant step on a rank-deficient chain means the remaining
        // error is unreachable; accept the projected solution
        const bool stagnant =
            rank_deficient &&
            (trial.cfg.theta - state.cfg.theta).norm() <= 1e-13;
        F = F_trial;
        state = trial;
        err_norm = trial_err;
        out.residual_history.push_back(err_norm);
        if (stagnant) {
          out.cfg = state.cfg;
          out.wrench = F;
          out.loading = state.loading;
          out.tcp = state.tcp;
          out.residual = state.residual;
          out.iterations = iter;
          return out;
        }
        break;
      }
      scale *= 0.5;
    }
  }
  throw NonConvergence("equilibrium-for-pose did not converge", err_norm,
                       settings.max_iterations);
}

Matrix6d cartesian_stiffness(const ManipulatorDescription& model,
                             const LoadedState& state) {
  const Eigen::VectorXd k_theta = model.joint_stiffness();
  const Eigen::MatrixXd H =
      loading_hessian(model, state.cfg, state.wrench, state.loading);
  const Eigen::MatrixXd reduced = Eigen::MatrixXd(k_theta.asDiagonal()) - H;
  const CheckedSolver inner(reduced, "K_theta - H is numerically singular");

  const Eigen::MatrixXd J = node_jacobian(model, state.cfg, kTcp);
  const Matrix6d compliance = J * inner.solve(J.transpose());
  const CheckedSolver outer(compliance,
                            "Cartesian compliance is numerically singular");
  return outer.solve(Matrix6d::Identity());
}

}  // namespace rmill
