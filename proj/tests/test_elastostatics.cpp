#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rmill/elastostatics.hpp"
#include "support/chains.hpp"

#include <random>

using namespace rmill;
using namespace rmill::testing;

namespace {

ManipulatorDescription gravity_free(ManipulatorDescription m) {
  std::fill(m.link_masses.begin(), m.link_masses.end(), 0.0);
  return m;
}

}  // namespace

TEST_CASE("unloaded chain is the fixed point") {
  std::mt19937 rng(53);
  ManipulatorDescription model = gravity_free(random_chain(rng));
  const Eigen::VectorXd q = random_config(rng, model.dof());

  const LoadedState by_force =
      solve_equilibrium_for_force(model, q, Vector6d::Zero());
  CHECK(by_force.cfg.theta.norm() == 0.0);
  CHECK(by_force.residual <= 1e-9);

  const Pose unloaded = forward_kinematics(model, JointConfig::Rigid(q));
  const LoadedState by_pose = solve_equilibrium_for_pose(model, q, unloaded);
  CHECK(by_pose.cfg.theta.norm() < 1e-12);
  CHECK(by_pose.wrench.norm() < 1e-6);
}

TEST_CASE("one-link tip force and tip displacement solutions") {
  const double L = 0.9, c = 2e-6;
  ManipulatorDescription model = one_link(L, c);
  const Eigen::VectorXd q0 = Eigen::VectorXd::Zero(1);

  SUBCASE("prescribed force") {
    const double fy = 120.0;
    Vector6d F = Vector6d::Zero();
    F[1] = fy;
    const LoadedState state = solve_equilibrium_for_force(model, q0, F);
    // k*theta = J^T F, small-angle tip deflection c*L^2*fy
    const double expected = c * L * L * fy;
    CHECK(state.tcp[1] == doctest::Approx(expected).epsilon(1e-3));
    CHECK(state.residual <= 1e-9);
  }

  SUBCASE("prescribed pose") {
    const double delta = 2e-4;  // rad, reachable target on the tip circle
    Pose target = Pose::Zero();
    target[0] = L * std::cos(delta);
    target[1] = L * std::sin(delta);
    target[5] = delta;
    const LoadedState state = solve_equilibrium_for_pose(model, q0, target);
    CHECK(state.cfg.theta[0] == doctest::Approx(delta).epsilon(1e-9));
    // torque balance against the recovered wrench
    const Eigen::VectorXd tau =
        node_jacobian(model, state.cfg).transpose() * state.wrench;
    CHECK(tau[0] == doctest::Approx(delta / c).epsilon(1e-6));
  }
}

TEST_CASE("equilibrium satisfies the balance equation under gravity") {
  std::mt19937 rng(59);
  for (int trial = 0; trial < 10; ++trial) {
    ManipulatorDescription model = random_chain(rng);
    const Eigen::VectorXd q = random_config(rng, model.dof());
    const Vector6d F = random_wrench(rng, 200.0, 30.0);

    const LoadedState state = solve_equilibrium_for_force(model, q, F);
    CHECK(state.residual < 1e-9);

    // direct substitution with independently recomputed terms
    const Eigen::VectorXd lhs =
        model.joint_stiffness().asDiagonal() * state.cfg.theta;
    const NodeLoading G = gravity_loading(model, state.cfg);
    Eigen::VectorXd rhs =
        node_jacobian(model, state.cfg).transpose() * state.wrench;
    rhs += node_jacobian_stack(model, state.cfg).transpose() * G.G;
    CHECK((lhs - rhs).norm() < 1e-9);
  }
}

TEST_CASE("pose and force solvers are mutual inverses") {
  std::mt19937 rng(61);
  for (int trial = 0; trial < 10; ++trial) {
    ManipulatorDescription model = random_chain(rng);
    const Eigen::VectorXd q = random_config(rng, model.dof());
    const Vector6d F = random_wrench(rng, 150.0, 20.0);

    const LoadedState fwd = solve_equilibrium_for_force(model, q, F);
    const LoadedState back = solve_equilibrium_for_pose(model, q, fwd.tcp);
    CHECK((back.tcp - fwd.tcp).head<3>().norm() < 1e-8);
    CHECK((back.wrench - F).norm() < 1e-4 * std::max(1.0, F.norm()));

    const LoadedState fwd2 =
        solve_equilibrium_for_force(model, q, back.wrench);
    CHECK((fwd2.tcp - fwd.tcp).head<3>().norm() < 1e-8);
  }
}

TEST_CASE("residual decreases over the final iterations") {
  std::mt19937 rng(67);
  ManipulatorDescription model = random_chain(rng);
  const Eigen::VectorXd q = random_config(rng, model.dof());
  const Vector6d F = random_wrench(rng, 400.0, 50.0);
  const LoadedState state = solve_equilibrium_for_force(model, q, F);
  REQUIRE(state.residual_history.size() >= 3);
  const auto& hist = state.residual_history;
  for (std::size_t i = hist.size() - 3; i + 1 < hist.size(); ++i)
    CHECK(hist[i + 1] < hist[i]);
}

TEST_CASE("cartesian stiffness") {
  std::mt19937 rng(71);

  SUBCASE("unloaded case reduces to (J C J^T)^-1") {
    ManipulatorDescription model = gravity_free(random_chain(rng));
    const Eigen::VectorXd q = random_config(rng, model.dof());
    const LoadedState state =
        solve_equilibrium_for_force(model, q, Vector6d::Zero());
    const Matrix6d K_c = cartesian_stiffness(model, state);

    const Eigen::MatrixXd J = node_jacobian(model, state.cfg);
    const Matrix6d K_ref =
        (J * model.joint_compliances.asDiagonal() * J.transpose())
            .inverse();
    CHECK((K_c - K_ref).norm() / K_ref.norm() < 1e-9);

    // symmetric positive definite away from singularities
    CHECK((K_c - K_c.transpose()).norm() / K_c.norm() < 1e-9);
    Eigen::SelfAdjointEigenSolver<Matrix6d> eig(0.5 * (K_c + K_c.transpose()));
    CHECK(eig.eigenvalues().minCoeff() > 0.0);
  }

  SUBCASE("one-link translational stiffness perpendicular to the link") {
    const double L = 0.7, c = 1.5e-6;
    ManipulatorDescription model = one_link(L, c);
    const LoadedState state = solve_equilibrium_for_force(
        model, Eigen::VectorXd::Zero(1), Vector6d::Zero());

    // 1-dof chain: compare the y-direction compliance instead of K_c
    const Eigen::MatrixXd J = node_jacobian(model, state.cfg);
    const Eigen::MatrixXd C_c = J * c * J.transpose();
    CHECK(1.0 / C_c(1, 1) == doctest::Approx(1.0 / (c * L * L)).epsilon(1e-12));
  }

  SUBCASE("loaded stiffness is symmetric") {
    ManipulatorDescription model = random_chain(rng);
    const Eigen::VectorXd q = random_config(rng, model.dof());
    const Vector6d F = random_wrench(rng, 250.0, 40.0);
    const LoadedState state = solve_equilibrium_for_force(model, q, F);
    const Matrix6d K_c = cartesian_stiffness(model, state);
    CHECK((K_c - K_c.transpose()).norm() / K_c.norm() < 1e-9);
  }

  SUBCASE("force-deflection linearization cross-check") {
    ManipulatorDescription model = gravity_free(random_chain(rng));
    const Eigen::VectorXd q = random_config(rng, model.dof());
    const LoadedState base =
        solve_equilibrium_for_force(model, q, Vector6d::Zero());
    const Matrix6d K_c = cartesian_stiffness(model, base);

    const Vector6d F = random_wrench(rng, 5.0, 1.0);
    const LoadedState loaded = solve_equilibrium_for_force(model, q, F);
    const Vector6d predicted = K_c.ldlt().solve(F);
    const Vector6d actual = loaded.tcp - base.tcp;
    CHECK((predicted - actual).norm() < 0.01 * actual.norm());
  }
}
