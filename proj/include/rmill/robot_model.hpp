#pragma once

#include "rmill/beam_mass.hpp"
#include "rmill/types.hpp"

#include <vector>

namespace rmill {

/// One serial-chain segment: a revolute actuated joint with a coaxial
/// torsional virtual spring, followed by the link's rigid transform.
/// The joint axis is expressed in the frame preceding the joint; the
/// tip translation and fixed rotation are applied after the rotation.
struct LinkDescription {
  Eigen::Vector3d joint_axis = Eigen::Vector3d::UnitZ();
  Eigen::Vector3d tip_translation = Eigen::Vector3d::Zero();
  Eigen::Matrix3d tip_rotation = Eigen::Matrix3d::Identity();
  double com_fraction = 0.5;  // mass centre position along the node-to-node segment
};

/// Serial manipulator with lumped joint elasticity. Node points O_0..O_n
/// sit at the link attachment ends: O_0 is the root of link 1 (just after
/// joint 1) and O_j the tip of link j; O_n carries the tool.
struct ManipulatorDescription {
  std::vector<LinkDescription> links;
  Eigen::VectorXd joint_compliances;  // rad/(N*m), diagonal of K_theta^-1
  std::vector<double> link_masses;    // kg
  std::vector<BeamParams> link_beams;
  Eigen::Vector3d gravity{0.0, 0.0, -9.81};
  Eigen::Isometry3d base = Eigen::Isometry3d::Identity();

  int dof() const { return static_cast<int>(links.size()); }
  int node_count() const { return dof() + 1; }  // O_0..O_n

  /// Joint stiffness diagonal K_theta (N*m/rad).
  Eigen::VectorXd joint_stiffness() const;

  /// Throws ConfigError when sizes or signs are inconsistent.
  void validate() const;
};

struct JointConfig {
  Eigen::VectorXd q;      // actuated joint coordinates, rad
  Eigen::VectorXd theta;  // virtual joint deflections, rad

  static JointConfig Rigid(const Eigen::VectorXd& q_) {
    return {q_, Eigen::VectorXd::Zero(q_.size())};
  }
};

/// Stacked 6-vectors of external loading applied at the node points,
/// one block per node O_0..O_n (force N, moment N*m, base frame).
struct NodeLoading {
  Eigen::VectorXd G;

  static NodeLoading Zero(int node_count) {
    return {Eigen::VectorXd::Zero(6 * node_count)};
  }
  int node_count() const { return static_cast<int>(G.size()) / 6; }
  Eigen::Ref<Vector6d> at(int node) { return G.segment<6>(6 * node); }
  Vector6d at(int node) const { return G.segment<6>(6 * node); }
};

/// Sentinel accepted wherever a node index is expected: the tool end-point
/// (same as node n).
inline constexpr int kTcp = -1;

/// World-frame chain state at a configuration: node frames plus the joint
/// axes and origins needed for Jacobians.
struct FrameChain {
  std::vector<Eigen::Isometry3d> node_frames;    // O_0..O_n
  std::vector<Eigen::Vector3d> joint_axes;       // world, per joint 1..n
  std::vector<Eigen::Vector3d> joint_origins;    // world, per joint 1..n
};

FrameChain compute_frames(const ManipulatorDescription& model,
                          const JointConfig& cfg);

/// Pose of node point O_node (or the tool end-point) at the configuration.
Pose forward_kinematics(const ManipulatorDescription& model,
                        const JointConfig& cfg, int node = kTcp);

/// 6 x n_theta Jacobian of the node pose with respect to the virtual joint
/// coordinates. Rotation rows are derivatives of the rotation-vector
/// components, so the matrix matches finite differences of
/// forward_kinematics directly.
Eigen::MatrixXd node_jacobian(const ManipulatorDescription& model,
                              const JointConfig& cfg, int node = kTcp);

/// Stacked node Jacobians, 6*(n+1) x n_theta, rows ordered O_0..O_n.
/// `rot_refs`, when given, selects rotation-vector branches (one 3-vector
/// per node) so that finite differencing across a half-turn orientation
/// stays on a continuous branch.
Eigen::MatrixXd node_jacobian_stack(
    const ManipulatorDescription& model, const JointConfig& cfg,
    const std::vector<Eigen::Vector3d>* rot_refs = nullptr);

/// Virtual-joint torque of the applied loading: J_F^T F + sum_j J_j^T G_j.
Eigen::VectorXd loading_torque(const ManipulatorDescription& model,
                               const JointConfig& cfg, const Vector6d& F,
                               const NodeLoading& G);

/// Second-order loading term H = d(J_F^T F + J_G^T G)/d(theta) for fixed
/// F and G, by central differences of the analytic Jacobians. Symmetrized.
Eigen::MatrixXd loading_hessian(const ManipulatorDescription& model,
                                const JointConfig& cfg, const Vector6d& F,
                                const NodeLoading& G,
                                double fd_step = 1e-6);

/// Gravity loading: each link's weight split between its two end nodes by
/// the lever rule about the mass centre. Pure forces, zero node moments.
NodeLoading gravity_loading(const ManipulatorDescription& model,
                            const JointConfig& cfg);

}  // namespace rmill
