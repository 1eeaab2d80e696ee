// primitives.hpp
//
// Closed-form locally volume-preserving deformation primitives. Each maps a
// reference point x (cm) to its deformed position and has an exact gradient
// with unit determinant wherever it is valid.

#pragma once

#include "isokin/backbone.hpp"
#include "isokin/modal.hpp"

#include <Eigen/Core>

#include <memory>
#include <string_view>
#include <variant>
#include <vector>

namespace isokin
{

/// Non-uniform elongation along x3; `rate` is m_e'(x3) and must stay positive.
struct Elongation
{
  ModalFunction rate;
};

enum class CurveTwistKind
{
  Material, // carries the cross-section with the curve's own frame: theta = -phi
  Minimal,  // globally minimal twist: theta = theta_1 + theta_2
};

/// Twist angle read off a backbone's bending frame, for composition ahead of a Bend3D.
struct CurveTwist
{
  std::shared_ptr<const BackboneCurve> curve;
  CurveTwistKind kind = CurveTwistKind::Material;
};

using AngleProfile = std::variant<ModalFunction, CurveTwist>;

/// Rotation of each x3-plane about the z axis by m_theta(x3).
struct Twist
{
  AngleProfile angle;
};

/// Translation of each x3-plane by (m_s1(x3), m_s2(x3)).
struct Shear
{
  ModalFunction s1;
  ModalFunction s2;
};

/// Planar bend along a backbone in the y-z plane whose curvature m_kappa(x3) is
/// parameterized by arclength over [0, length]. The whole map is conjugated by
/// a rotation of `plane_rotation` about z.
class Bend2D
{
public:
  static constexpr int kPanels = 256;

  Bend2D(ModalFunction curvature, double length, double plane_rotation = 0.0);

  const ModalFunction &curvature() const { return _curvature; }
  double length() const { return _length; }
  double plane_rotation() const { return _plane_rotation; }

  /// Tangent angle int_0^s m_kappa.
  double angle(double s) const { return _curvature.integral(s); }
  /// Backbone position a(s) = (0, int sin(theta), int cos(theta)).
  Eigen::Vector3d position(double s) const;

private:
  Eigen::Vector2d integrate(double from, double to) const;

  ModalFunction _curvature;
  double _length;
  double _plane_rotation;
  std::vector<Eigen::Vector2d> _nodes; // (y, z) of the backbone at panel boundaries
};

/// Bend along a 3D backbone: b3(x) = a(x3) + nu n(x3) + x1 b(x3) in the
/// curve's bending frame, with nu = (1 - sqrt(1 - 2 kappa x2)) / kappa.
struct Bend3D
{
  std::shared_ptr<const BackboneCurve> backbone;
};

/// Radial source: (x1, x2) scaled to radius sqrt(m_c(x3) + r^2).
struct Source
{
  ModalFunction strength;
};

using DeformationPrimitive = std::variant<Elongation, Twist, Shear, Bend2D, Bend3D, Source>;

std::string_view primitive_name(const DeformationPrimitive &prim);
bool is_bend(const DeformationPrimitive &prim);

bool validity(const DeformationPrimitive &prim, const Eigen::Vector3d &x);
/// Throws SingularInput when !validity(prim, x).
Eigen::Vector3d apply(const DeformationPrimitive &prim, const Eigen::Vector3d &x);
/// Throws SingularInput when !validity(prim, x).
Eigen::Matrix3d gradient(const DeformationPrimitive &prim, const Eigen::Vector3d &x);

/// Value and derivatives of the bend offset nu(kappa, x2). Below |kappa| < 1e-6
/// nu uses the series x2 + kappa x2^2/2 + kappa^2 x2^3/2.
struct BendOffset
{
  double nu;
  double dnu_dx2;
  double dnu_dkappa;
  double stretch; // 1 - kappa nu
};

inline constexpr double kBendSeriesThreshold = 1e-6;

BendOffset bend_offset(double kappa, double x2);
/// Closed form (1 - sqrt(1 - 2 kappa x2)) / kappa without the series switch,
/// evaluated as 2 x2 / (1 + sqrt(1 - 2 kappa x2)).
double bend_offset_exact(double kappa, double x2);
double bend_offset_series(double kappa, double x2);

/// Factored gradient of a Bend3D: gradient = frame * factor, frame columns
/// (b, n, t) matching reference axes (x1, x2, x3).
struct Bend3DFactors
{
  Eigen::Matrix3d frame;
  Eigen::Matrix3d factor;
  double kappa, torsion, nu;
  double dnu_dx1, dnu_dx2, dnu_dx3;
  double dbeta_dx1, dbeta_dx2, dbeta_dx3;
};

Bend3DFactors bend3d_factors(const Bend3D &bend, const Eigen::Vector3d &x);

/// Angle and its x3-derivative for either kind of twist profile.
double twist_angle(const AngleProfile &angle, double x3);
double twist_angle_rate(const AngleProfile &angle, double x3);

} // namespace isokin
