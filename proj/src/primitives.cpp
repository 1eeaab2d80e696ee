// primitives.cpp

#include "isokin/primitives.hpp"
#include "isokin/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>

namespace isokin
{

namespace
{

constexpr std::array<double, 5> kGaussNodes{0.0, -0.5384693101056831, 0.5384693101056831, -0.9061798459386640,
                                             0.9061798459386640};
constexpr std::array<double, 5> kGaussWeights{0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                                               0.2369268850561891, 0.2369268850561891};

template <class... Ts>
struct overloaded : Ts...
{
  using Ts::operator()...;
};

[[noreturn]] void singular(const DeformationPrimitive &prim, const Eigen::Vector3d &x)
{
  throw Error(ErrorCode::SingularInput, std::string(primitive_name(prim)) + " is singular at (" +
                                            std::to_string(x.x()) + ", " + std::to_string(x.y()) + ", " +
                                            std::to_string(x.z()) + ")");
}

// Rows/cols in (b, n, t) coordinates for a bend with bending-frame torsion tau.
Eigen::Matrix3d bend_factor(const BendOffset &off, double kappa_rate, double tau, double x1)
{
  Eigen::Matrix3d M;
  M << 1.0, 0.0, -off.nu * tau,
       0.0, off.dnu_dx2, off.dnu_dkappa * kappa_rate + x1 * tau,
       0.0, 0.0, off.stretch;
  return M;
}

bool bend_valid(double kappa, double x2) { return 2.0 * kappa * x2 < 1.0; }

Eigen::Matrix3d planar_frame(double theta)
{
  const double c = std::cos(theta), s = std::sin(theta);
  Eigen::Matrix3d R;
  // columns b = e1, n = (0, cos, -sin), t = (0, sin, cos)
  R << 1.0, 0.0, 0.0,
       0.0, c, s,
       0.0, -s, c;
  return R;
}

// --- per-primitive kernels -------------------------------------------------

Eigen::Vector3d apply_elongation(const Elongation &e, const Eigen::Vector3d &x)
{
  const double inv = 1.0 / std::sqrt(e.rate.eval(x.z()));
  return {inv * x.x(), inv * x.y(), e.rate.integral(x.z())};
}

Eigen::Matrix3d gradient_elongation(const Elongation &e, const Eigen::Vector3d &x)
{
  const double r = e.rate.eval(x.z());
  const double dr = e.rate.deriv(x.z());
  const double inv = 1.0 / std::sqrt(r);
  const double d = -0.5 * dr * inv / r;
  Eigen::Matrix3d G;
  G << inv, 0.0, d * x.x(),
       0.0, inv, d * x.y(),
       0.0, 0.0, r;
  return G;
}

Eigen::Vector3d apply_twist(const Twist &t, const Eigen::Vector3d &x)
{
  const double a = twist_angle(t.angle, x.z());
  const double c = std::cos(a), s = std::sin(a);
  return {c * x.x() - s * x.y(), s * x.x() + c * x.y(), x.z()};
}

Eigen::Matrix3d gradient_twist(const Twist &t, const Eigen::Vector3d &x)
{
  const double a = twist_angle(t.angle, x.z());
  const double da = twist_angle_rate(t.angle, x.z());
  const double c = std::cos(a), s = std::sin(a);
  Eigen::Matrix3d G;
  G << c, -s, -da * (s * x.x() + c * x.y()),
       s, c, da * (c * x.x() - s * x.y()),
       0.0, 0.0, 1.0;
  return G;
}

Eigen::Vector3d apply_shear(const Shear &sh, const Eigen::Vector3d &x)
{
  return {x.x() + sh.s1.eval(x.z()), x.y() + sh.s2.eval(x.z()), x.z()};
}

Eigen::Matrix3d gradient_shear(const Shear &sh, const Eigen::Vector3d &x)
{
  Eigen::Matrix3d G = Eigen::Matrix3d::Identity();
  G(0, 2) = sh.s1.deriv(x.z());
  G(1, 2) = sh.s2.deriv(x.z());
  return G;
}

Eigen::Vector3d apply_bend2d(const Bend2D &b, const Eigen::Vector3d &x)
{
  const Eigen::Matrix3d Rz = rot_z(b.plane_rotation());
  const Eigen::Vector3d y = Rz.transpose() * x;
  const double s = y.z();
  const BendOffset off = bend_offset(b.curvature().eval(s), y.y());
  const Eigen::Matrix3d F = planar_frame(b.angle(s));
  const Eigen::Vector3d out = b.position(s) + off.nu * F.col(1) + y.x() * F.col(0);
  return Rz * out;
}

Eigen::Matrix3d gradient_bend2d(const Bend2D &b, const Eigen::Vector3d &x)
{
  const Eigen::Matrix3d Rz = rot_z(b.plane_rotation());
  const Eigen::Vector3d y = Rz.transpose() * x;
  const double s = y.z();
  const BendOffset off = bend_offset(b.curvature().eval(s), y.y());
  const Eigen::Matrix3d G = planar_frame(b.angle(s)) * bend_factor(off, b.curvature().deriv(s), 0.0, y.x());
  return Rz * G * Rz.transpose();
}

Eigen::Vector3d apply_bend3d(const Bend3D &b, const Eigen::Vector3d &x)
{
  const BendingFrame bf = b.backbone->bending_frame(x.z());
  const BendOffset off = bend_offset(bf.kappa, x.y());
  return bf.position + off.nu * bf.frame.col(1) + x.x() * bf.frame.col(0);
}

Eigen::Vector3d apply_source(const Source &src, const Eigen::Vector3d &x)
{
  const double m = src.strength.eval(x.z());
  if(m == 0.0)
    return x;
  const double r = std::hypot(x.x(), x.y());
  const double scale = std::sqrt(m + r * r) / r;
  return {scale * x.x(), scale * x.y(), x.z()};
}

Eigen::Matrix3d gradient_source(const Source &src, const Eigen::Vector3d &x)
{
  const double m = src.strength.eval(x.z());
  const double dm = src.strength.deriv(x.z());
  const double r = std::hypot(x.x(), x.y());
  if(r == 0.0)
    return Eigen::Matrix3d::Identity(); // only reachable with m == 0 and dm == 0 on valid input
  const double rho = std::sqrt(m + r * r);
  const Eigen::Vector2d u(x.x() / r, x.y() / r);
  const Eigen::Matrix2d uu = u * u.transpose();
  Eigen::Matrix3d G = Eigen::Matrix3d::Zero();
  G.topLeftCorner<2, 2>() = rho / r * (Eigen::Matrix2d::Identity() - uu) + r / rho * uu;
  G.topRightCorner<2, 1>() = 0.5 * dm / rho * u;
  G(2, 2) = 1.0;
  return G;
}

} // namespace

// --- Bend2D ------------------------------------------------------------------

Bend2D::Bend2D(ModalFunction curvature, double length, double plane_rotation)
    : _curvature(std::move(curvature)), _length(length), _plane_rotation(plane_rotation)
{
  if(!(length > 0.0))
    throw Error(ErrorCode::InvalidArgument, "bend length must be positive");
  _nodes.resize(kPanels + 1);
  _nodes[0].setZero();
  const double h = _length / kPanels;
  for(int i = 0; i < kPanels; ++i)
    _nodes[static_cast<std::size_t>(i) + 1] = _nodes[static_cast<std::size_t>(i)] + integrate(i * h, (i + 1) * h);
}

Eigen::Vector2d Bend2D::integrate(double from, double to) const
{
  const double half = 0.5 * (to - from);
  const double mid = 0.5 * (to + from);
  Eigen::Vector2d acc = Eigen::Vector2d::Zero();
  for(std::size_t k = 0; k < kGaussNodes.size(); ++k)
  {
    const double th = angle(mid + half * kGaussNodes[k]);
    acc += kGaussWeights[k] * Eigen::Vector2d(std::sin(th), std::cos(th));
  }
  return half * acc;
}

Eigen::Vector3d Bend2D::position(double s) const
{
  const double h = _length / kPanels;
  const auto i = static_cast<std::size_t>(std::clamp(std::floor(s / h), 0.0, static_cast<double>(kPanels)));
  const Eigen::Vector2d yz = _nodes[i] + integrate(static_cast<double>(i) * h, s);
  return {0.0, yz.x(), yz.y()};
}

// --- bend offset -------------------------------------------------------------

double bend_offset_exact(double kappa, double x2)
{
  // (1 - q) / kappa rationalized to 2 x2 / (1 + q), which has no cancellation
  return 2.0 * x2 / (1.0 + std::sqrt(1.0 - 2.0 * kappa * x2));
}

double bend_offset_series(double kappa, double x2)
{
  return x2 + 0.5 * kappa * x2 * x2 + 0.5 * kappa * kappa * x2 * x2 * x2;
}

BendOffset bend_offset(double kappa, double x2)
{
  const double q = std::sqrt(1.0 - 2.0 * kappa * x2);
  BendOffset out;
  out.nu = std::abs(kappa) < kBendSeriesThreshold ? bend_offset_series(kappa, x2) : bend_offset_exact(kappa, x2);
  out.dnu_dx2 = 1.0 / q;
  out.dnu_dkappa = 2.0 * x2 * x2 / (q * (1.0 + q) * (1.0 + q));
  out.stretch = q;
  return out;
}

Bend3DFactors bend3d_factors(const Bend3D &bend, const Eigen::Vector3d &x)
{
  const BendingFrame bf = bend.backbone->bending_frame(x.z());
  if(!bend_valid(bf.kappa, x.y()))
    singular(bend, x);
  const BendOffset off = bend_offset(bf.kappa, x.y());
  Bend3DFactors f;
  f.frame = bf.frame;
  f.factor = bend_factor(off, bf.kappa_rate, bf.torsion, x.x());
  f.kappa = bf.kappa;
  f.torsion = bf.torsion;
  f.nu = off.nu;
  f.dnu_dx1 = 0.0;
  f.dnu_dx2 = off.dnu_dx2;
  f.dnu_dx3 = off.dnu_dkappa * bf.kappa_rate;
  f.dbeta_dx1 = 1.0;
  f.dbeta_dx2 = 0.0;
  f.dbeta_dx3 = 0.0;
  return f;
}

// --- twist profiles ------------------------------------------------------------

double twist_angle(const AngleProfile &angle, double x3)
{
  if(const auto *m = std::get_if<ModalFunction>(&angle))
    return m->eval(x3);
  const auto &ct = std::get<CurveTwist>(angle);
  const BendingFrame bf = ct.curve->bending_frame(x3);
  // minimal twist: theta_1 + theta_2 = -(phi - phi0) - int omega_3 - phi0
  return ct.kind == CurveTwistKind::Material ? -bf.phi : -bf.phi - bf.twist;
}

double twist_angle_rate(const AngleProfile &angle, double x3)
{
  if(const auto *m = std::get_if<ModalFunction>(&angle))
    return m->deriv(x3);
  const auto &ct = std::get<CurveTwist>(angle);
  const BendingFrame bf = ct.curve->bending_frame(x3);
  return ct.kind == CurveTwistKind::Material ? -bf.phi_rate : -bf.torsion;
}

// --- dispatch ------------------------------------------------------------------

std::string_view primitive_name(const DeformationPrimitive &prim)
{
  return std::visit(overloaded{[](const Elongation &) { return std::string_view("elongation"); },
                               [](const Twist &) { return std::string_view("twist"); },
                               [](const Shear &) { return std::string_view("shear"); },
                               [](const Bend2D &) { return std::string_view("bend2d"); },
                               [](const Bend3D &) { return std::string_view("bend3d"); },
                               [](const Source &) { return std::string_view("source"); }},
                    prim);
}

bool is_bend(const DeformationPrimitive &prim)
{
  return std::holds_alternative<Bend2D>(prim) || std::holds_alternative<Bend3D>(prim);
}

bool validity(const DeformationPrimitive &prim, const Eigen::Vector3d &x)
{
  return std::visit(overloaded{[&](const Elongation &e) { return e.rate.eval(x.z()) > 0.0; },
                               [](const Twist &) { return true; },
                               [](const Shear &) { return true; },
                               [&](const Bend2D &b) {
                                 const Eigen::Vector3d y = rot_z(-b.plane_rotation()) * x;
                                 return bend_valid(b.curvature().eval(y.z()), y.y());
                               },
                               [&](const Bend3D &b) {
                                 return bend_valid(b.backbone->bending_frame(x.z()).kappa, x.y());
                               },
                               [&](const Source &s) {
                                 const double m = s.strength.eval(x.z());
                                 const double r2 = x.x() * x.x() + x.y() * x.y();
                                 if(m == 0.0)
                                   return r2 > 0.0 || s.strength.deriv(x.z()) == 0.0;
                                 return r2 > 0.0 && m + r2 > 0.0;
                               }},
                    prim);
}

Eigen::Vector3d apply(const DeformationPrimitive &prim, const Eigen::Vector3d &x)
{
  if(!validity(prim, x))
    singular(prim, x);
  return std::visit(overloaded{[&](const Elongation &e) { return apply_elongation(e, x); },
                               [&](const Twist &t) { return apply_twist(t, x); },
                               [&](const Shear &s) { return apply_shear(s, x); },
                               [&](const Bend2D &b) { return apply_bend2d(b, x); },
                               [&](const Bend3D &b) { return apply_bend3d(b, x); },
                               [&](const Source &s) { return apply_source(s, x); }},
                    prim);
}

Eigen::Matrix3d gradient(const DeformationPrimitive &prim, const Eigen::Vector3d &x)
{
  if(!validity(prim, x))
    singular(prim, x);
  return std::visit(overloaded{[&](const Elongation &e) { return gradient_elongation(e, x); },
                               [&](const Twist &t) { return gradient_twist(t, x); },
                               [&](const Shear &s) { return gradient_shear(s, x); },
                               [&](const Bend2D &b) { return gradient_bend2d(b, x); },
                               [&](const Bend3D &b) -> Eigen::Matrix3d {
                                 const Bend3DFactors f = bend3d_factors(b, x);
                                 return f.frame * f.factor;
                               },
                               [&](const Source &s) { return gradient_source(s, x); }},
                    prim);
}

} // namespace isokin
