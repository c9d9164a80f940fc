#include "rmill/elastodynamics.hpp"

#include "rmill/se3.hpp"

#include <cmath>

namespace rmill {

namespace {

constexpr double kConditionLimit = 1e12;

// local beam frame with x along the node-to-node segment
Eigen::Matrix3d beam_frame(const Eigen::Vector3d& root,
                           const Eigen::Vector3d& tip) {
  const Eigen::Vector3d d = tip - root;
  const double len = d.norm();
  if (len < 1e-12)
    throw ConfigError("degenerate link geometry: coincident node points");
  const Eigen::Vector3d x = d / len;
  // complete with the least-aligned cardinal axis
  int least = 0;
  x.cwiseAbs().minCoeff(&least);
  const Eigen::Vector3d seed = Eigen::Vector3d::Unit(least);
  const Eigen::Vector3d z = x.cross(seed).normalized();
  const Eigen::Vector3d y = z.cross(x);
  Eigen::Matrix3d R;
  R.col(0) = x;
  R.col(1) = y;
  R.col(2) = z;
  return R;
}

Eigen::Matrix<double, 12, 12> block_rotation(const Eigen::Matrix3d& R) {
  Eigen::Matrix<double, 12, 12> B = Eigen::Matrix<double, 12, 12>::Zero();
  for (int k = 0; k < 4; ++k) B.block<3, 3>(3 * k, 3 * k) = R;
  return B;
}

}  // namespace

Matrix6d cartesian_mass(const ManipulatorDescription& model,
                        const LoadedState& state,
                        const std::vector<Matrix12d>& link_masses) {
  const int n = model.dof();
  if (static_cast<int>(link_masses.size()) != n)
    throw ConfigError("one reduced link mass per link expected");

  const Eigen::VectorXd k_theta = model.joint_stiffness();
  const Eigen::MatrixXd H =
      loading_hessian(model, state.cfg, state.wrench, state.loading);
  const Eigen::MatrixXd reduced = Eigen::MatrixXd(k_theta.asDiagonal()) - H;

  Eigen::FullPivLU<Eigen::MatrixXd> lu(reduced);
  if (!lu.isInvertible() || lu.rcond() < 1.0 / kConditionLimit)
    throw SingularMatrix("K_theta - H is numerically singular");

  const FrameChain chain = compute_frames(model, state.cfg);
  const Eigen::MatrixXd stack = node_jacobian_stack(model, state.cfg);
  const Eigen::MatrixXd J_tcp = stack.bottomRows<6>();

  const Matrix6d Cc = J_tcp * lu.solve(J_tcp.transpose());
  Eigen::FullPivLU<Matrix6d> lu_c(Cc);
  if (!lu_c.isInvertible() || lu_c.rcond() < 1.0 / kConditionLimit)
    throw SingularJacobian("tool Jacobian is numerically singular");
  const Matrix6d Kc = lu_c.solve(Matrix6d::Identity());

  // static deformation shape: TCP displacement -> virtual joint motion
  const Eigen::MatrixXd Y = lu.solve(J_tcp.transpose() * Kc);  // n x 6

  // physical node velocities per TCP parameter velocity
  std::vector<Eigen::Matrix<double, 6, 6>> W(n + 1);
  for (int node = 0; node <= n; ++node) {
    Eigen::MatrixXd Jp = stack.middleRows<6>(6 * node);
    // rotation rows back to angular velocity (undo the rotation-vector chart)
    const Eigen::Vector3d rv =
        se3::rotation_log(chain.node_frames[node].linear());
    Jp.bottomRows<3>() = se3::left_jacobian(rv) * Jp.bottomRows<3>();
    W[node] = Jp * Y;
  }

  Matrix6d M_c = Matrix6d::Zero();
  for (int j = 0; j < n; ++j) {
    const Eigen::Matrix3d R = beam_frame(
        chain.node_frames[j].translation(),
        chain.node_frames[j + 1].translation());
    const Matrix12d M_base =
        block_rotation(R) * link_masses[j] * block_rotation(R).transpose();
    Eigen::Matrix<double, 12, 6> Wj;
    Wj.topRows<6>() = W[j];
    Wj.bottomRows<6>() = W[j + 1];
    M_c.noalias() += Wj.transpose() * M_base * Wj;
  }
  return 0.5 * (M_c + M_c.transpose());
}

Matrix6d cartesian_mass(const ManipulatorDescription& model,
                        const LoadedState& state) {
  if (model.link_beams.empty())
    throw ConfigError("model has no link beam parameters");
  std::vector<Matrix12d> masses;
  masses.reserve(model.link_beams.size());
  for (const auto& beam : model.link_beams)
    masses.push_back(reduced_link_mass(beam));
  return cartesian_mass(model, state, masses);
}

Matrix6d damping_matrix(const Matrix6d& M_c, const Matrix6d& K_c, double alpha,
                        double beta) {
  return alpha * M_c + beta * K_c;
}

}  // namespace rmill
