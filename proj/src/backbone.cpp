// backbone.cpp

#include "isokin/backbone.hpp"
#include "isokin/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace isokin
{

namespace
{

constexpr double kFlatCurvature = 1e-9;

struct Rate
{
  Eigen::Matrix3d dR;
  Eigen::Vector3d dt;
  Eigen::Vector3d dw;
  double dtwist;
};

Eigen::Vector3d explicit_rate(const ExplicitOmega &m, double s)
{
  if(m.rate)
    return m.rate(s);
  const double h = 1e-5 * std::max(1.0, std::abs(s));
  return (m.omega(s + h) - m.omega(s - h)) / (2.0 * h);
}

Rate rate_at(const OmegaModel &model, double s, const Eigen::Matrix3d &R, const Eigen::Vector3d &w)
{
  Rate r;
  r.dt = R.col(2);
  if(const auto *ex = std::get_if<ExplicitOmega>(&model))
  {
    const Eigen::Vector3d ws = ex->omega(s);
    r.dR = R * hat3(ws);
    r.dw.setZero();
    r.dtwist = ws.z();
  }
  else
  {
    const auto &cf = std::get<ConformationalOmega>(model);
    r.dR = R * hat3(w);
    r.dw = Eigen::Vector3d(-cf.lambda.dot(R.col(1)), cf.lambda.dot(R.col(0)), 0.0);
    r.dtwist = w.z();
  }
  return r;
}

double raw_phi(const Eigen::Vector3d &w) { return std::atan2(w.y(), w.x()) + std::numbers::pi; }

// representative of `angle` mod pi closest to `reference`
double nearest_branch(double angle, double reference)
{
  return angle + std::numbers::pi * std::round((reference - angle) / std::numbers::pi);
}

} // namespace

BackboneCurve::BackboneCurve(OmegaModel model, double length, int steps)
    : _model(std::move(model)), _length(length), _steps(steps)
{
  if(!(length > 0.0))
    throw Error(ErrorCode::InvalidArgument, "backbone length must be positive");
  if(steps < 2)
    throw Error(ErrorCode::InvalidArgument, "backbone needs at least 2 steps");
  if(const auto *ex = std::get_if<ExplicitOmega>(&_model); ex && !ex->omega)
    throw Error(ErrorCode::InvalidArgument, "explicit backbone needs an omega function");

  FrameSample st;
  if(const auto *ex = std::get_if<ExplicitOmega>(&_model))
    st.omega = ex->omega(0.0);
  else
    st.omega = std::get<ConformationalOmega>(_model).omega0;

  _samples.reserve(static_cast<std::size_t>(steps) + 1);
  _samples.push_back(st);
  const double h = length / steps;
  for(int i = 1; i <= steps; ++i)
  {
    st = advance(st, h);
    st.s = i * h; // avoid accumulated drift in the abscissa
    _samples.push_back(st);
  }

  _phi.resize(_samples.size());
  double ref = 0.0;
  for(std::size_t i = 0; i < _samples.size(); ++i)
  {
    const Eigen::Vector3d &w = _samples[i].omega;
    if(std::hypot(w.x(), w.y()) > 1e-12)
      ref = nearest_branch(raw_phi(w), ref);
    _phi[i] = ref;
  }
}

FrameSample BackboneCurve::advance(const FrameSample &from, double h) const
{
  const double s0 = from.s;
  const Rate k1 = rate_at(_model, s0, from.R, from.omega);
  const Rate k2 = rate_at(_model, s0 + 0.5 * h, from.R + 0.5 * h * k1.dR, from.omega + 0.5 * h * k1.dw);
  const Rate k3 = rate_at(_model, s0 + 0.5 * h, from.R + 0.5 * h * k2.dR, from.omega + 0.5 * h * k2.dw);
  const Rate k4 = rate_at(_model, s0 + h, from.R + h * k3.dR, from.omega + h * k3.dw);

  FrameSample out;
  out.s = s0 + h;
  out.R = orthonormalize(from.R + h / 6.0 * (k1.dR + 2.0 * k2.dR + 2.0 * k3.dR + k4.dR));
  out.t = from.t + h / 6.0 * (k1.dt + 2.0 * k2.dt + 2.0 * k3.dt + k4.dt);
  out.twist = from.twist + h / 6.0 * (k1.dtwist + 2.0 * k2.dtwist + 2.0 * k3.dtwist + k4.dtwist);
  if(const auto *ex = std::get_if<ExplicitOmega>(&_model))
    out.omega = ex->omega(out.s);
  else
    out.omega = from.omega + h / 6.0 * (k1.dw + 2.0 * k2.dw + 2.0 * k3.dw + k4.dw);
  return out;
}

double BackboneCurve::curvature(std::size_t i) const
{
  const Eigen::Vector3d &w = _samples.at(i).omega;
  return std::hypot(w.x(), w.y());
}

Eigen::Vector3d BackboneCurve::omega_rate(const FrameSample &state) const
{
  if(const auto *ex = std::get_if<ExplicitOmega>(&_model))
    return explicit_rate(*ex, state.s);
  return rate_at(_model, state.s, state.R, state.omega).dw;
}

double BackboneCurve::torsion(std::size_t i) const
{
  const FrameSample &st = _samples.at(i);
  const Eigen::Vector3d &w = st.omega;
  const double k2 = w.x() * w.x() + w.y() * w.y();
  if(k2 <= kFlatCurvature * kFlatCurvature)
    return w.z();
  const Eigen::Vector3d dw = omega_rate(st);
  return w.z() + (w.x() * dw.y() - w.y() * dw.x()) / k2;
}

FrameSample BackboneCurve::state_at(double s) const
{
  const double h = step();
  const auto idx = static_cast<std::size_t>(std::clamp(std::round(s / h), 0.0, static_cast<double>(_steps)));
  const FrameSample &from = _samples[idx];
  if(s == from.s)
    return from;
  return advance(from, s - from.s);
}

double BackboneCurve::branch_phi(const FrameSample &state, double reference) const
{
  const Eigen::Vector3d &w = state.omega;
  if(std::hypot(w.x(), w.y()) <= 1e-12)
    return reference;
  return nearest_branch(raw_phi(w), reference);
}

BendingFrame BackboneCurve::bending_frame(double s) const
{
  const double h = step();
  const auto idx = static_cast<std::size_t>(std::clamp(std::round(s / h), 0.0, static_cast<double>(_steps)));
  const FrameSample st = state_at(s);
  const Eigen::Vector3d &w = st.omega;
  const Eigen::Vector3d dw = omega_rate(st);

  BendingFrame bf;
  bf.phi = branch_phi(st, _phi[idx]);
  const double c = std::cos(bf.phi), sn = std::sin(bf.phi);
  const double k2 = w.x() * w.x() + w.y() * w.y();
  bf.phi_rate = k2 > kFlatCurvature * kFlatCurvature ? (w.x() * dw.y() - w.y() * dw.x()) / k2 : 0.0;
  bf.frame = st.R * rot_z(bf.phi);
  bf.position = st.t;
  bf.kappa = -(c * w.x() + sn * w.y());
  bf.kappa_rate = -(c * dw.x() + sn * dw.y());
  bf.torsion = w.z() + bf.phi_rate;
  bf.twist = st.twist;
  return bf;
}

RigidPose BackboneCurve::end_pose() const
{
  RigidPose g;
  g.rotation = _samples.back().R;
  g.translation = _samples.back().t;
  return g;
}

BackboneCurve integrate_backbone(std::function<Eigen::Vector3d(double)> omega, double length, int steps)
{
  return BackboneCurve(ExplicitOmega{std::move(omega), {}}, length, steps);
}

double MinimalTwist::eval(double at) const
{
  if(s.empty())
    return theta2;
  if(at <= s.front())
    return theta1.front() + theta2;
  if(at >= s.back())
    return theta1.back() + theta2;
  const auto it = std::upper_bound(s.begin(), s.end(), at);
  const auto j = static_cast<std::size_t>(it - s.begin());
  const double w = (at - s[j - 1]) / (s[j] - s[j - 1]);
  return (1.0 - w) * theta1[j - 1] + w * theta1[j] + theta2;
}

MinimalTwist minimal_twist_angle(const BackboneCurve &curve, bool strict)
{
  const auto &samples = curve.samples();
  MinimalTwist out;
  out.s.resize(samples.size());
  out.theta1.resize(samples.size());
  double acc = 0.0;
  double prevTau = curve.torsion(0);
  out.s[0] = samples[0].s;
  out.theta1[0] = 0.0;
  for(std::size_t i = 1; i < samples.size(); ++i)
  {
    const double tau = curve.torsion(i);
    acc -= 0.5 * (tau + prevTau) * (samples[i].s - samples[i - 1].s);
    prevTau = tau;
    out.s[i] = samples[i].s;
    out.theta1[i] = acc;
  }
  if(curve.curvature(0) < kFlatCurvature)
  {
    if(strict)
      throw Error(ErrorCode::UndefinedNormal, "curvature vanishes at s = 0; normal direction undefined");
    out.theta2 = 0.0;
    return out;
  }
  // normal at 0 is R(0) Rz(phi0) e2; rotating by -phi0 brings it back onto the curve frame's x2 axis
  out.theta2 = -curve.bending_frame(0.0).phi;
  return out;
}

} // namespace isokin
