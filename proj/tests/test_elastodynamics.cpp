#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rmill/elastodynamics.hpp"
#include "support/chains.hpp"

#include <random>

using namespace rmill;
using namespace rmill::testing;

namespace {

BeamParams beam_for(double L, double mass, double section_scale = 1.0) {
  BeamParams b;
  b.L = L;
  b.rho = 7850.0;
  b.A = mass / (b.rho * L);
  const double r2 = section_scale * b.A / M_PI;  // solid-rod scale
  b.Iy = 0.25 * M_PI * r2 * r2;
  b.Iz = b.Iy;
  b.Ip = 2.0 * b.Iy;
  return b;
}

ManipulatorDescription six_dof_chain(std::mt19937& rng, bool with_mass) {
  ManipulatorDescription m = random_chain(rng, 6, with_mass);
  m.link_beams.clear();
  for (int j = 0; j < m.dof(); ++j) {
    const double L = m.links[j].tip_translation.norm();
    const double mass = with_mass ? m.link_masses[j] : 1e-6;
    m.link_beams.push_back(beam_for(std::max(L, 0.05), std::max(mass, 1e-6)));
  }
  return m;
}

}  // namespace

TEST_CASE("point-mass limit: translational block is the body mass") {
  std::mt19937 rng(89);
  ManipulatorDescription model = random_chain(rng, 6, /*with_mass=*/false);
  // near-massless chain with a short heavy body at the tool
  model.links.back().tip_translation = Eigen::Vector3d(1e-6, 0, 0);
  const double body_mass = 55.0;
  model.link_beams.clear();
  for (int j = 0; j < model.dof(); ++j) {
    const double L = std::max(model.links[j].tip_translation.norm(), 1e-6);
    const double mass = (j == model.dof() - 1) ? body_mass : 1e-9;
    BeamParams b = beam_for(L, mass);
    b.Iy = b.Iz = 1e-30;
    b.Ip = 1e-30;
    model.link_beams.push_back(b);
  }
  model.link_masses.assign(model.dof(), 0.0);

  const Eigen::VectorXd q = random_config(rng, model.dof());
  const LoadedState state =
      solve_equilibrium_for_force(model, q, Vector6d::Zero());
  const Matrix6d M_c = cartesian_mass(model, state);

  const Eigen::Matrix3d tt = M_c.topLeftCorner<3, 3>();
  CHECK((tt - body_mass * Eigen::Matrix3d::Identity()).norm() <
        1e-4 * body_mass);
}

TEST_CASE("cartesian mass is symmetric positive definite and linear in rho") {
  std::mt19937 rng(97);
  ManipulatorDescription model = six_dof_chain(rng, true);
  const Eigen::VectorXd q = random_config(rng, model.dof());
  const LoadedState state =
      solve_equilibrium_for_force(model, q, Vector6d::Zero());

  const Matrix6d M_c = cartesian_mass(model, state);
  CHECK((M_c - M_c.transpose()).norm() < 1e-12 * M_c.norm());
  Eigen::SelfAdjointEigenSolver<Matrix6d> eig(M_c);
  CHECK(eig.eigenvalues().minCoeff() > 0.0);

  ManipulatorDescription doubled = model;
  for (auto& b : doubled.link_beams) b.rho *= 2.0;
  const Matrix6d M_c2 = cartesian_mass(doubled, state);
  CHECK((M_c2 - 2.0 * M_c).norm() < 1e-12 * M_c.norm());
}

TEST_CASE("base-frame rotation transforms the translational block congruently") {
  std::mt19937 rng(101);
  ManipulatorDescription model = six_dof_chain(rng, true);
  const Eigen::VectorXd q = random_config(rng, model.dof());
  const LoadedState state =
      solve_equilibrium_for_force(model, q, Vector6d::Zero());
  const Matrix6d M_c = cartesian_mass(model, state);

  const Eigen::Matrix3d R =
      Eigen::AngleAxisd(0.7, Eigen::Vector3d(1, 1, 0.5).normalized())
          .toRotationMatrix();
  ManipulatorDescription rotated = model;
  rotated.base.linear() = R;
  rotated.gravity = R * model.gravity;
  const LoadedState state_r =
      solve_equilibrium_for_force(rotated, q, Vector6d::Zero());
  const Matrix6d M_r = cartesian_mass(rotated, state_r);

  const Eigen::Matrix3d tt = M_c.topLeftCorner<3, 3>();
  const Eigen::Matrix3d tt_r = M_r.topLeftCorner<3, 3>();
  CHECK((tt_r - R * tt * R.transpose()).norm() < 1e-8 * tt.norm());
}

TEST_CASE("rayleigh damping") {
  std::mt19937 rng(103);
  ManipulatorDescription model = six_dof_chain(rng, true);
  const Eigen::VectorXd q = random_config(rng, model.dof());
  const LoadedState state =
      solve_equilibrium_for_force(model, q, Vector6d::Zero());
  const Matrix6d M_c = cartesian_mass(model, state);
  const Matrix6d K_c = cartesian_stiffness(model, state);

  CHECK(damping_matrix(M_c, K_c, 0.0, 0.0).norm() == 0.0);

  const Matrix6d C_m = damping_matrix(M_c, K_c, 3.0, 0.0);
  CHECK((C_m - 3.0 * M_c).norm() == 0.0);

  const Matrix6d C = damping_matrix(M_c, K_c, 2.0, 1e-4);
  CHECK((C - C.transpose()).norm() < 1e-12 * C.norm());

  // scalar reduction: zeta = (alpha/w + beta*w)/2
  const double m = 3.0, k = 1.2e5, alpha = 2.0, beta = 1e-4;
  const double w = std::sqrt(k / m);
  const double c = alpha * m + beta * k;
  const double zeta = c / (2.0 * std::sqrt(k * m));
  CHECK(zeta == doctest::Approx((alpha / w + beta * w) / 2.0).epsilon(1e-12));
}
