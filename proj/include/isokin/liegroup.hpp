// liegroup.hpp
//
// SO(3)/SE(3) operators. Twist coordinates are ordered (rotation, translation),
// i.e. xi = sum_i xi_i E~_i with E~_1..E~_3 the rotation generators and
// E~_4..E~_6 the translation generators.

#pragma once

#include <Eigen/Core>

namespace isokin
{

using Vector6d = Eigen::Matrix<double, 6, 1>;
using Matrix6d = Eigen::Matrix<double, 6, 6>;
using Twist6 = Vector6d;

/// Element of SE(3).
struct RigidPose
{
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();

  static RigidPose identity() { return {}; }
  static RigidPose from_matrix(const Eigen::Matrix4d &g);

  Eigen::Matrix4d matrix() const;
  RigidPose inverse() const;
  Eigen::Vector3d operator*(const Eigen::Vector3d &x) const { return rotation * x + translation; }
};

RigidPose operator*(const RigidPose &a, const RigidPose &b);

bool is_rotation(const Eigen::Matrix3d &R, double tol = 1e-10);

Eigen::Matrix3d hat3(const Eigen::Vector3d &v);
/// Throws NotSkew when `S` is not skew-symmetric to 1e-12 (relative).
Eigen::Vector3d vee3(const Eigen::Matrix3d &S);

Eigen::Matrix4d hat6(const Twist6 &xi);
Twist6 vee6(const Eigen::Matrix4d &X);

/// Ad(g) = [[R, 0], [hat(t) R, R]].
Matrix6d adjoint(const RigidPose &g);

Eigen::Matrix3d exp_so3(const Eigen::Vector3d &w);
/// Principal branch; throws AngleNearPi when the rotation angle is within 1e-6 of pi.
Eigen::Vector3d log_so3(const Eigen::Matrix3d &R);

RigidPose exp_se3(const Twist6 &xi);
Twist6 log_se3(const RigidPose &g);

/// Nearest rotation by two Newton polar iterations R <- (R + R^-T) / 2.
Eigen::Matrix3d orthonormalize(const Eigen::Matrix3d &R);

Eigen::Matrix3d rot_z(double angle);

} // namespace isokin
