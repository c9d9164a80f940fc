#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace rmill {

using Vector6d = Eigen::Matrix<double, 6, 1>;
using Matrix6d = Eigen::Matrix<double, 6, 6>;
using Matrix12d = Eigen::Matrix<double, 12, 12>;

/// End-point pose as a 6-vector [x y z rx ry rz]: position in metres and
/// orientation as an axis-angle rotation vector in the base frame.
using Pose = Vector6d;

struct NonConvergence : std::runtime_error {
  NonConvergence(const std::string& what, double residual_, int iterations_)
      : std::runtime_error(what), residual(residual_), iterations(iterations_) {}
  double residual;
  int iterations;
};

struct SingularJacobian : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SingularMatrix : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SingularMass : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised when the simulated dynamic displacement exceeds the configured
/// sanity bound (runaway vibration / chatter blow-up).
struct Instability : std::runtime_error {
  Instability(const std::string& what, double time_)
      : std::runtime_error(what), time(time_) {}
  double time;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace rmill
