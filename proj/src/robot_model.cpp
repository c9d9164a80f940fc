#include "rmill/robot_model.hpp"

#include "rmill/se3.hpp"

#include <cmath>

namespace rmill {

Eigen::VectorXd ManipulatorDescription::joint_stiffness() const {
  return joint_compliances.cwiseInverse();
}

void ManipulatorDescription::validate() const {
  const auto n = links.size();
  if (n < 1) throw ConfigError("manipulator needs at least one link");
  if (joint_compliances.size() != static_cast<Eigen::Index>(n))
    throw ConfigError("joint_compliances size must equal the number of virtual joints");
  if ((joint_compliances.array() <= 0.0).any())
    throw ConfigError("joint compliances must be strictly positive");
  if (!link_masses.empty() && link_masses.size() != n)
    throw ConfigError("link_masses size must equal the link count");
  if (!link_beams.empty() && link_beams.size() != n)
    throw ConfigError("link_beams size must equal the link count");
  for (const auto& b : link_beams)
    if (!b.valid()) throw ConfigError("beam parameters must be strictly positive");
  for (const auto& l : links) {
    if (std::abs(l.joint_axis.norm() - 1.0) > 1e-9)
      throw ConfigError("joint axes must be unit vectors");
    if (l.com_fraction < 0.0 || l.com_fraction > 1.0)
      throw ConfigError("com_fraction must lie in [0, 1]");
  }
}

FrameChain compute_frames(const ManipulatorDescription& model,
                          const JointConfig& cfg) {
  const int n = model.dof();
  if (cfg.q.size() != n || cfg.theta.size() != n)
    throw ConfigError("configuration dimension does not match the model");

  FrameChain chain;
  chain.node_frames.reserve(n + 1);
  chain.joint_axes.reserve(n);
  chain.joint_origins.reserve(n);

  Eigen::Isometry3d T = model.base;
  for (int j = 0; j < n; ++j) {
    const LinkDescription& link = model.links[j];
    chain.joint_axes.push_back(T.linear() * link.joint_axis);
    chain.joint_origins.push_back(T.translation());
    T = T * Eigen::AngleAxisd(cfg.q[j] + cfg.theta[j], link.joint_axis);
    if (j == 0) chain.node_frames.push_back(T);  // O_0: root of link 1
    T.translate(link.tip_translation);
    T.rotate(link.tip_rotation);
    chain.node_frames.push_back(T);  // O_{j+1}
  }
  return chain;
}

namespace {

int resolve_node(const ManipulatorDescription& model, int node) {
  const int n = model.dof();
  if (node == kTcp) return n;
  if (node < 1 || node > n)
    throw ConfigError("node index out of range [1, n]");
  return node;
}

// 6 x n_theta Jacobian of the node pose; rotation rows differentiate the
// rotation-vector components (left-Jacobian-inverse times angular velocity).
Eigen::MatrixXd jacobian_of_node(const ManipulatorDescription& model,
                                 const FrameChain& chain, int node,
                                 const Eigen::Vector3d* rot_ref) {
  const int n = model.dof();
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(6, n);
  const Eigen::Isometry3d& T = chain.node_frames[node];
  const Eigen::Vector3d rv =
      rot_ref ? se3::rotation_log_near(T.linear(), *rot_ref)
              : se3::rotation_log(T.linear());
  const Eigen::Matrix3d Jl_inv = se3::left_jacobian_inverse(rv);
  // node j moves with joints 1..j (and O_0 with joint 1 only)
  const int last_joint = (node == 0) ? 1 : node;
  for (int k = 0; k < last_joint; ++k) {
    const Eigen::Vector3d& axis = chain.joint_axes[k];
    J.col(k).head<3>() = axis.cross(T.translation() - chain.joint_origins[k]);
    J.col(k).tail<3>() = Jl_inv * axis;
  }
  return J;
}

}  // namespace

Pose forward_kinematics(const ManipulatorDescription& model,
                        const JointConfig& cfg, int node) {
  const int j = resolve_node(model, node);
  const FrameChain chain = compute_frames(model, cfg);
  return se3::pose_from_transform(chain.node_frames[j]);
}

Eigen::MatrixXd node_jacobian(const ManipulatorDescription& model,
                              const JointConfig& cfg, int node) {
  const int j = resolve_node(model, node);
  const FrameChain chain = compute_frames(model, cfg);
  return jacobian_of_node(model, chain, j, nullptr);
}

Eigen::MatrixXd node_jacobian_stack(
    const ManipulatorDescription& model, const JointConfig& cfg,
    const std::vector<Eigen::Vector3d>* rot_refs) {
  const int n = model.dof();
  const FrameChain chain = compute_frames(model, cfg);
  Eigen::MatrixXd stack(6 * (n + 1), n);
  for (int node = 0; node <= n; ++node) {
    const Eigen::Vector3d* ref =
        rot_refs ? &(*rot_refs)[node] : nullptr;
    stack.middleRows<6>(6 * node) = jacobian_of_node(model, chain, node, ref);
  }
  return stack;
}

Eigen::VectorXd loading_torque(const ManipulatorDescription& model,
                               const JointConfig& cfg, const Vector6d& F,
                               const NodeLoading& G) {
  const int n = model.dof();
  if (G.node_count() != n + 1)
    throw ConfigError("node loading block count must be n+1");
  const Eigen::MatrixXd stack = node_jacobian_stack(model, cfg);
  Eigen::VectorXd tau = stack.bottomRows<6>().transpose() * F;  // TCP block
  tau += stack.transpose() * G.G;
  return tau;
}

Eigen::MatrixXd loading_hessian(const ManipulatorDescription& model,
                                const JointConfig& cfg, const Vector6d& F,
                                const NodeLoading& G, double fd_step) {
  const int n = model.dof();
  if (G.node_count() != n + 1)
    throw ConfigError("node loading block count must be n+1");

  // rotation-vector branches of the unperturbed configuration keep the
  // differenced Jacobians on one continuous chart
  const FrameChain chain0 = compute_frames(model, cfg);
  std::vector<Eigen::Vector3d> refs(n + 1);
  for (int node = 0; node <= n; ++node)
    refs[node] = se3::rotation_log(chain0.node_frames[node].linear());

  auto torque_at = [&](const Eigen::VectorXd& theta) {
    JointConfig c{cfg.q, theta};
    const Eigen::MatrixXd stack = node_jacobian_stack(model, c, &refs);
    Eigen::VectorXd tau = stack.bottomRows<6>().transpose() * F;
    tau += stack.transpose() * G.G;
    return tau;
  };

  Eigen::MatrixXd H(n, n);
  for (int k = 0; k < n; ++k) {
    Eigen::VectorXd tp = cfg.theta, tm = cfg.theta;
    tp[k] += fd_step;
    tm[k] -= fd_step;
    H.col(k) = (torque_at(tp) - torque_at(tm)) / (2.0 * fd_step);
  }
  return 0.5 * (H + H.transpose());
}

NodeLoading gravity_loading(const ManipulatorDescription& model,
                            const JointConfig& cfg) {
  const int n = model.dof();
  NodeLoading G = NodeLoading::Zero(n + 1);
  if (model.link_masses.empty()) return G;
  (void)compute_frames(model, cfg);  // dimension check; split is rigid
  for (int j = 0; j < n; ++j) {
    const double m = model.link_masses[j];
    if (m == 0.0) continue;
    const double s = model.links[j].com_fraction;
    const Eigen::Vector3d w = m * model.gravity;
    G.at(j).head<3>() += (1.0 - s) * w;      // root node O_j
    G.at(j + 1).head<3>() += s * w;          // tip node O_{j+1}
  }
  return G;
}

}  // namespace rmill
