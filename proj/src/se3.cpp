#include "rmill/se3.hpp"

#include <cmath>

namespace rmill::se3 {

Eigen::Matrix3d skew(const Eigen::Vector3d& v) {
  Eigen::Matrix3d S;
  S << 0, -v.z(), v.y(), v.z(), 0, -v.x(), -v.y(), v.x(), 0;
  return S;
}

Eigen::Matrix3d rotation_exp(const Eigen::Vector3d& rv) {
  const double angle = rv.norm();
  if (angle < 1e-12) {
    // second-order expansion, exact enough at this scale
    const Eigen::Matrix3d S = skew(rv);
    return Eigen::Matrix3d::Identity() + S + 0.5 * S * S;
  }
  return Eigen::AngleAxisd(angle, rv / angle).toRotationMatrix();
}

Eigen::Vector3d rotation_log(const Eigen::Matrix3d& R) {
  const Eigen::AngleAxisd aa(R);
  // Eigen returns angle in [0, pi]
  return aa.angle() * aa.axis();
}

Eigen::Vector3d rotation_log_near(const Eigen::Matrix3d& R,
                                  const Eigen::Vector3d& ref) {
  Eigen::Vector3d rv = rotation_log(R);
  const double angle = rv.norm();
  if (angle < 1e-9) return rv;
  // the antipodal representation of the same rotation
  const Eigen::Vector3d alt = rv * (1.0 - 2.0 * M_PI / angle);
  return ((rv - ref).squaredNorm() <= (alt - ref).squaredNorm()) ? rv : alt;
}

Eigen::Matrix3d left_jacobian(const Eigen::Vector3d& rv) {
  const double a = rv.norm();
  const Eigen::Matrix3d S = skew(rv);
  if (a < 1e-6) {
    return Eigen::Matrix3d::Identity() + 0.5 * S + (1.0 / 6.0) * S * S;
  }
  const double a2 = a * a;
  return Eigen::Matrix3d::Identity() + ((1.0 - std::cos(a)) / a2) * S +
         ((a - std::sin(a)) / (a2 * a)) * S * S;
}

Eigen::Matrix3d left_jacobian_inverse(const Eigen::Vector3d& rv) {
  const double a = rv.norm();
  const Eigen::Matrix3d S = skew(rv);
  if (a < 1e-6) {
    return Eigen::Matrix3d::Identity() - 0.5 * S + (1.0 / 12.0) * S * S;
  }
  // c = (1 - (a/2) cot(a/2)) / a^2, well conditioned on (0, 2pi)
  const double half = 0.5 * a;
  const double c = (1.0 - half * std::cos(half) / std::sin(half)) / (a * a);
  return Eigen::Matrix3d::Identity() - 0.5 * S + c * S * S;
}

Pose pose_from_transform(const Eigen::Isometry3d& T) {
  Pose t;
  t.head<3>() = T.translation();
  t.tail<3>() = rotation_log(T.linear());
  return t;
}

Pose pose_from_transform_near(const Eigen::Isometry3d& T,
                              const Eigen::Vector3d& rot_ref) {
  Pose t;
  t.head<3>() = T.translation();
  t.tail<3>() = rotation_log_near(T.linear(), rot_ref);
  return t;
}

Eigen::Isometry3d transform_from_pose(const Pose& t) {
  Eigen::Isometry3d T = Eigen::Isometry3d::Identity();
  T.translation() = t.head<3>();
  T.linear() = rotation_exp(t.tail<3>());
  return T;
}

}  // namespace rmill::se3
