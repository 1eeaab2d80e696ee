// backbone.hpp
//
// Inextensible backbone curves integrated from a body angular velocity,
// dR/ds = R hat(omega), dt/ds = R e3, and their bending-aligned framing.

#pragma once

#include "isokin/liegroup.hpp"

#include <Eigen/Core>

#include <functional>
#include <variant>
#include <vector>

namespace isokin
{

/// Curve state at arclength s. `twist` is the running integral of omega_3.
struct FrameSample
{
  double s = 0.0;
  Eigen::Matrix3d R = Eigen::Matrix3d::Identity();
  Eigen::Vector3d t = Eigen::Vector3d::Zero();
  Eigen::Vector3d omega = Eigen::Vector3d::Zero();
  double twist = 0.0;
};

/// Frame rotated about the tangent so that the curve bends purely along its
/// second axis: columns (b, n, t), body angular velocity (-kappa, 0, torsion).
/// `kappa` is signed so the frame stays continuous through inflections.
struct BendingFrame
{
  Eigen::Matrix3d frame = Eigen::Matrix3d::Identity();
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  double kappa = 0.0;
  double kappa_rate = 0.0;
  double torsion = 0.0;
  double phi = 0.0;      // rotation from the curve frame to the bending frame
  double phi_rate = 0.0;
  double twist = 0.0;    // integral of omega_3 from 0
};

/// omega(s) given explicitly; `rate` is optional (central differences otherwise).
struct ExplicitOmega
{
  std::function<Eigen::Vector3d(double)> omega;
  std::function<Eigen::Vector3d(double)> rate;
};

/// Conformational rod: omega(0) given, d omega/ds = (-lambda.R e2, lambda.R e1, 0).
struct ConformationalOmega
{
  Eigen::Vector3d omega0 = Eigen::Vector3d::Zero();
  Eigen::Vector3d lambda = Eigen::Vector3d::Zero();
};

using OmegaModel = std::variant<ExplicitOmega, ConformationalOmega>;

class BackboneCurve
{
public:
  /// RK4 with per-step polar re-orthonormalization. steps >= 2, length > 0.
  BackboneCurve(OmegaModel model, double length, int steps);

  double length() const { return _length; }
  int step_count() const { return _steps; }
  double step() const { return _length / _steps; }
  const std::vector<FrameSample> &samples() const { return _samples; }
  const OmegaModel &model() const { return _model; }

  /// ||(omega_1, omega_2)|| at sample i.
  double curvature(std::size_t i) const;
  /// Torsion of the bending frame at sample i: omega_3 + d phi/ds.
  double torsion(std::size_t i) const;

  /// Dense state, one RK4 step from the nearest sample.
  FrameSample state_at(double s) const;
  Eigen::Vector3d omega_rate(const FrameSample &state) const;
  BendingFrame bending_frame(double s) const;

  RigidPose end_pose() const;

private:
  FrameSample advance(const FrameSample &from, double h) const;
  double branch_phi(const FrameSample &state, double reference) const;

  OmegaModel _model;
  double _length;
  int _steps;
  std::vector<FrameSample> _samples;
  std::vector<double> _phi; // bending-frame angle at each sample, unwrapped mod pi
};

BackboneCurve integrate_backbone(std::function<Eigen::Vector3d(double)> omega, double length, int steps = 1000);

/// theta_1(s) = -int_0^s tau by cumulative trapezoid over the samples, and the
/// constant theta_2 that rotates the bending-frame normal at s = 0 back onto x2.
struct MinimalTwist
{
  std::vector<double> s;
  std::vector<double> theta1;
  double theta2 = 0.0;

  /// theta_1(s) + theta_2 with linear interpolation between samples.
  double eval(double at) const;
};

/// Throws UndefinedNormal when the curvature at s = 0 is below 1e-9 and
/// `strict` is set; otherwise theta_2 falls back to 0 in that case.
MinimalTwist minimal_twist_angle(const BackboneCurve &curve, bool strict = true);

} // namespace isokin
