// liegroup.cpp

#include "isokin/liegroup.hpp"
#include "isokin/error.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>

namespace isokin
{

namespace
{

constexpr double kPiMargin = 1e-6;

// coefficients of exp on so(3): A = sin(t)/t, B = (1 - cos(t))/t^2, C = (t - sin(t))/t^3
struct ExpCoefficients
{
  double a, b, c;
};

ExpCoefficients exp_coefficients(double theta)
{
  const double t2 = theta * theta;
  if(theta < 1e-4)
    return {1.0 - t2 / 6.0 + t2 * t2 / 120.0, 0.5 - t2 / 24.0 + t2 * t2 / 720.0,
            1.0 / 6.0 - t2 / 120.0 + t2 * t2 / 5040.0};
  const double s = std::sin(theta);
  const double h = std::sin(0.5 * theta);
  return {s / theta, 2.0 * h * h / t2, (theta - s) / (t2 * theta)};
}

} // namespace

RigidPose RigidPose::from_matrix(const Eigen::Matrix4d &g)
{
  RigidPose out;
  out.rotation = g.topLeftCorner<3, 3>();
  out.translation = g.topRightCorner<3, 1>();
  return out;
}

Eigen::Matrix4d RigidPose::matrix() const
{
  Eigen::Matrix4d g = Eigen::Matrix4d::Identity();
  g.topLeftCorner<3, 3>() = rotation;
  g.topRightCorner<3, 1>() = translation;
  return g;
}

RigidPose RigidPose::inverse() const
{
  RigidPose out;
  out.rotation = rotation.transpose();
  out.translation = -(out.rotation * translation);
  return out;
}

RigidPose operator*(const RigidPose &a, const RigidPose &b)
{
  RigidPose out;
  out.rotation = a.rotation * b.rotation;
  out.translation = a.rotation * b.translation + a.translation;
  return out;
}

bool is_rotation(const Eigen::Matrix3d &R, double tol)
{
  return (R.transpose() * R - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() <= tol &&
         std::abs(R.determinant() - 1.0) <= tol;
}

Eigen::Matrix3d hat3(const Eigen::Vector3d &v)
{
  Eigen::Matrix3d S;
  S << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
       -v.y(), v.x(), 0.0;
  return S;
}

Eigen::Vector3d vee3(const Eigen::Matrix3d &S)
{
  const double scale = std::max(1.0, S.cwiseAbs().maxCoeff());
  if((S + S.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw Error(ErrorCode::NotSkew, "matrix is not skew-symmetric");
  return {S(2, 1), S(0, 2), S(1, 0)};
}

Eigen::Matrix4d hat6(const Twist6 &xi)
{
  Eigen::Matrix4d X = Eigen::Matrix4d::Zero();
  X.topLeftCorner<3, 3>() = hat3(xi.head<3>());
  X.topRightCorner<3, 1>() = xi.tail<3>();
  return X;
}

Twist6 vee6(const Eigen::Matrix4d &X)
{
  const double scale = std::max(1.0, X.cwiseAbs().maxCoeff());
  if(X.row(3).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw Error(ErrorCode::NotSkew, "se(3) element must have a zero bottom row");
  Twist6 xi;
  xi.head<3>() = vee3(X.topLeftCorner<3, 3>());
  xi.tail<3>() = X.topRightCorner<3, 1>();
  return xi;
}

Matrix6d adjoint(const RigidPose &g)
{
  Matrix6d ad = Matrix6d::Zero();
  ad.topLeftCorner<3, 3>() = g.rotation;
  ad.bottomLeftCorner<3, 3>() = hat3(g.translation) * g.rotation;
  ad.bottomRightCorner<3, 3>() = g.rotation;
  return ad;
}

Eigen::Matrix3d exp_so3(const Eigen::Vector3d &w)
{
  const auto [a, b, c] = exp_coefficients(w.norm());
  const Eigen::Matrix3d W = hat3(w);
  return Eigen::Matrix3d::Identity() + a * W + b * W * W;
}

Eigen::Vector3d log_so3(const Eigen::Matrix3d &R)
{
  const Eigen::Vector3d axis2sin{R(2, 1) - R(1, 2), R(0, 2) - R(2, 0), R(1, 0) - R(0, 1)};
  const double c = 0.5 * (R.trace() - 1.0);
  const double s = 0.5 * axis2sin.norm();
  const double theta = std::atan2(s, c);
  if(theta > std::numbers::pi - kPiMargin)
    throw Error(ErrorCode::AngleNearPi, "rotation angle too close to pi for the principal logarithm");
  const double factor = theta < 1e-4 ? 0.5 * (1.0 + theta * theta / 6.0 + 7.0 * std::pow(theta, 4) / 360.0)
                                     : 0.5 * theta / s;
  return factor * axis2sin;
}

RigidPose exp_se3(const Twist6 &xi)
{
  const Eigen::Vector3d w = xi.head<3>();
  const auto [a, b, c] = exp_coefficients(w.norm());
  const Eigen::Matrix3d W = hat3(w);
  const Eigen::Matrix3d W2 = W * W;
  RigidPose g;
  g.rotation = Eigen::Matrix3d::Identity() + a * W + b * W2;
  const Eigen::Matrix3d V = Eigen::Matrix3d::Identity() + b * W + c * W2;
  g.translation = V * xi.tail<3>();
  return g;
}

Twist6 log_se3(const RigidPose &g)
{
  const Eigen::Vector3d w = log_so3(g.rotation);
  const double theta = w.norm();
  const Eigen::Matrix3d W = hat3(w);
  // V^-1 = I - W/2 + k W^2, k = (1 - A / (2B)) / theta^2
  double k;
  if(theta < 1e-4)
    k = 1.0 / 12.0 + theta * theta / 720.0;
  else
  {
    const auto [a, b, c] = exp_coefficients(theta);
    k = (1.0 - a / (2.0 * b)) / (theta * theta);
  }
  const Eigen::Matrix3d Vinv = Eigen::Matrix3d::Identity() - 0.5 * W + k * W * W;
  Twist6 xi;
  xi.head<3>() = w;
  xi.tail<3>() = Vinv * g.translation;
  return xi;
}

Eigen::Matrix3d orthonormalize(const Eigen::Matrix3d &R)
{
  Eigen::Matrix3d Q = R;
  for(int it = 0; it < 2; ++it)
    Q = 0.5 * (Q + Q.transpose().inverse());
  return Q;
}

Eigen::Matrix3d rot_z(double angle)
{
  const double c = std::cos(angle), s = std::sin(angle);
  Eigen::Matrix3d R;
  R << c, -s, 0.0,
       s, c, 0.0,
       0.0, 0.0, 1.0;
  return R;
}

} // namespace isokin
