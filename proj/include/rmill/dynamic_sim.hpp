#pragma once

#include "rmill/cutting.hpp"
#include "rmill/elastodynamics.hpp"
#include "rmill/elastostatics.hpp"
#include "rmill/workpiece_grid.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace rmill {

/// Second-order state of the tool end-point around its trajectory position.
struct DynamicState {
  Eigen::VectorXd dt;  // dynamic displacement
  Eigen::VectorXd dv;  // velocity
  Eigen::VectorXd da;  // acceleration
  double tau = 0;      // time, s

  static DynamicState Zero(int dofs) {
    return {Eigen::VectorXd::Zero(dofs), Eigen::VectorXd::Zero(dofs),
            Eigen::VectorXd::Zero(dofs), 0.0};
  }
};

/// Newmark average-acceleration stepper (gamma = 1/2, beta = 1/4,
/// unconditionally stable) for M a + C v + K x = F with constant matrices.
class NewmarkIntegrator {
 public:
  NewmarkIntegrator(const Eigen::MatrixXd& M, const Eigen::MatrixXd& C,
                    const Eigen::MatrixXd& K, double dt_step);

  DynamicState step(const DynamicState& state, const Eigen::VectorXd& F) const;

  double dt_step() const { return dt_; }

 private:
  Eigen::MatrixXd M_, C_, K_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lhs_;
  double dt_;
};

/// One Newmark step with ad-hoc matrices (tests, single-shot use).
DynamicState integrate_step(const DynamicState& state, const Eigen::MatrixXd& M,
                            const Eigen::MatrixXd& C, const Eigen::MatrixXd& K,
                            const Eigen::VectorXd& F, double dt_step);

struct PathPoint {
  double t = 0;
  Eigen::Vector2d xy = Eigen::Vector2d::Zero();
};

/// Clamped linear interpolation of the trajectory polyline.
Eigen::Vector2d path_position(const std::vector<PathPoint>& path, double t);

struct GridSpec {
  Eigen::Vector2d bounds_min = Eigen::Vector2d::Zero();
  Eigen::Vector2d bounds_max = Eigen::Vector2d::Zero();
  Eigen::Vector2d material_min = Eigen::Vector2d::Zero();
  Eigen::Vector2d material_max = Eigen::Vector2d::Zero();
  double dsx = 0;  // 0: default to feed-per-tooth / 8
  double dsy = 0;
};

struct Scenario {
  std::string name;
  ManipulatorDescription robot;
  Eigen::VectorXd q0;
  CuttingParams cutting;
  std::vector<PathPoint> path;
  GridSpec workpiece;
  double dt_step = 2e-5;          // s
  double duration = 0;            // s; 0 means last path time
  double damping_alpha = 5.0;     // 1/s
  double damping_beta = 1e-5;     // s
  double sanity_bound = 0.01;     // m, abort threshold on |dt|
  double refresh_interval = 0.01; // s between matrix refreshes; 0 = every step
  bool planar = true;             // integrate the (x, y) tool-plane subspace
  SolverSettings solver;

  double end_time() const {
    return duration > 0 ? duration : (path.empty() ? 0 : path.back().t);
  }
  void validate() const;
};

struct SimulationTrace {
  double dt = 0;
  int Nz = 0;
  std::vector<double> tau;
  std::vector<Eigen::Vector2d> nominal;  // commanded plane position
  std::vector<Eigen::Vector2d> defl;     // dynamic displacement, plane
  std::vector<Eigen::Vector2d> force;    // tool-frame F_x, F_y
  std::vector<std::vector<double>> chip; // per-tooth h_i
  std::vector<std::uint32_t> engaged;    // bitmask over teeth
  double first_mode_hz = 0;
  double tooth_passing_hz = 0;
  std::uint64_t scenario_hash = 0;

  std::size_t size() const { return tau.size(); }
};

struct SimulationResult {
  SimulationTrace trace;
  WorkpieceGrid grid;
  Eigen::MatrixXd K_red, M_red, C_red;  // reduced matrices at the last refresh
  LoadedState base_equilibrium;         // gravity equilibrium at q0
  Eigen::Matrix3d tool_rotation = Eigen::Matrix3d::Identity();
};

/// Runs the coupled machining simulation: per step the nominal TCP advances
/// along the path, the displaced tool centre sweeps each tooth over the
/// workpiece grid, chip areas give per-tooth forces, and the structural
/// equation is stepped with the resulting wrench. Structural matrices come
/// from the loaded equilibrium and are refreshed on `refresh_interval`.
SimulationResult run_simulation(const Scenario& scenario);

}  // namespace rmill
