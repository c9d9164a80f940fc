#pragma once

#include "rmill/elastostatics.hpp"
#include "rmill/robot_model.hpp"
#include "rmill/se3.hpp"

#include <random>

namespace rmill::testing {

/// Planar single link of length L rotating about z, with one torsional
/// virtual spring of compliance c. TCP at (L, 0, 0) for q = theta = 0.
inline ManipulatorDescription one_link(double L, double compliance,
                                       double mass = 0.0) {
  ManipulatorDescription m;
  LinkDescription link;
  link.joint_axis = Eigen::Vector3d::UnitZ();
  link.tip_translation = Eigen::Vector3d(L, 0, 0);
  m.links.push_back(link);
  m.joint_compliances = Eigen::VectorXd::Constant(1, compliance);
  m.link_masses = {mass};
  return m;
}

/// Random all-revolute spatial chain with n links: randomized axes, link
/// vectors, compliances and masses. Deterministic per seed.
inline ManipulatorDescription random_chain(std::mt19937& rng, int n = 6,
                                           bool with_mass = true) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> len(0.3, 1.0);
  std::uniform_real_distribution<double> comp(5e-7, 3e-6);
  std::uniform_real_distribution<double> mass(10.0, 200.0);

  ManipulatorDescription m;
  for (int j = 0; j < n; ++j) {
    LinkDescription link;
    // alternate between axes with jitter so the chain spans all directions
    Eigen::Vector3d axis =
        (j % 2 == 0) ? Eigen::Vector3d::UnitZ() : Eigen::Vector3d::UnitY();
    axis += 0.3 * Eigen::Vector3d(unit(rng), unit(rng), unit(rng));
    link.joint_axis = axis.normalized();
    link.tip_translation =
        Eigen::Vector3d(len(rng), 0.3 * unit(rng), 0.3 * unit(rng));
    m.links.push_back(link);
  }
  m.joint_compliances = Eigen::VectorXd::NullaryExpr(n, [&](Eigen::Index) {
    return comp(rng);
  });
  m.link_masses.assign(n, 0.0);
  if (with_mass)
    for (int j = 0; j < n; ++j) m.link_masses[j] = mass(rng);
  return m;
}

inline Eigen::VectorXd random_config(std::mt19937& rng, int n,
                                     double range = 1.2) {
  std::uniform_real_distribution<double> dist(-range, range);
  return Eigen::VectorXd::NullaryExpr(n, [&](Eigen::Index) { return dist(rng); });
}

inline Vector6d random_wrench(std::mt19937& rng, double force,
                              double moment) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Vector6d F;
  for (int i = 0; i < 3; ++i) F[i] = force * dist(rng);
  for (int i = 3; i < 6; ++i) F[i] = moment * dist(rng);
  return F;
}

/// Central finite difference of forward_kinematics, column k over theta_k.
inline Eigen::MatrixXd fd_jacobian(const ManipulatorDescription& model,
                                   const JointConfig& cfg, int node,
                                   double step = 1e-7) {
  const int n = model.dof();
  Eigen::MatrixXd J(6, n);
  for (int k = 0; k < n; ++k) {
    JointConfig plus = cfg, minus = cfg;
    plus.theta[k] += step;
    minus.theta[k] -= step;
    const Pose tp = forward_kinematics(model, plus, node);
    const Pose tm = forward_kinematics(model, minus, node);
    J.col(k) = (tp - tm) / (2.0 * step);
  }
  return J;
}

}  // namespace rmill::testing
