#pragma once

#include "rmill/types.hpp"

namespace rmill::se3 {

Eigen::Matrix3d skew(const Eigen::Vector3d& v);

/// Rodrigues formula: rotation matrix of the rotation vector rv.
Eigen::Matrix3d rotation_exp(const Eigen::Vector3d& rv);

/// Canonical rotation vector of R, angle in [0, pi].
Eigen::Vector3d rotation_log(const Eigen::Matrix3d& R);

/// Rotation vector of R on the branch closest to `ref`. Keeps the map
/// continuous across the pi boundary, which matters when differencing
/// poses or finite-differencing Jacobians near half-turn orientations.
Eigen::Vector3d rotation_log_near(const Eigen::Matrix3d& R,
                                  const Eigen::Vector3d& ref);

/// Inverse of the left Jacobian of SO(3): maps spatial angular velocity to
/// the time derivative of the rotation vector, d(rv)/dt = Jl_inv(rv) * w.
Eigen::Matrix3d left_jacobian_inverse(const Eigen::Vector3d& rv);

/// Left Jacobian of SO(3): w = Jl(rv) * d(rv)/dt.
Eigen::Matrix3d left_jacobian(const Eigen::Vector3d& rv);

/// Pose 6-vector from a rigid transform (canonical rotation branch).
Pose pose_from_transform(const Eigen::Isometry3d& T);

/// Same, with the rotation-vector branch chosen nearest `rot_ref`.
Pose pose_from_transform_near(const Eigen::Isometry3d& T,
                              const Eigen::Vector3d& rot_ref);

Eigen::Isometry3d transform_from_pose(const Pose& t);

}  // namespace rmill::se3
