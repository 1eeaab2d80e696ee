// modal.cpp

#include "isokin/modal.hpp"
#include "isokin/error.hpp"

#include <cmath>
#include <numbers>

namespace isokin
{

namespace
{

double wavenumber(const BasisMode &m) { return m.harmonic * std::numbers::pi / m.scale; }

} // namespace

double BasisMode::eval(double x) const
{
  switch(kind)
  {
  case ModeKind::Constant: return 1.0;
  case ModeKind::Linear: return x;
  case ModeKind::Sine: return std::sin(wavenumber(*this) * x);
  case ModeKind::Cosine: return std::cos(wavenumber(*this) * x);
  case ModeKind::QuadraticBc: return x * (x - scale);
  }
  return 0.0;
}

double BasisMode::deriv(double x) const
{
  switch(kind)
  {
  case ModeKind::Constant: return 0.0;
  case ModeKind::Linear: return 1.0;
  case ModeKind::Sine:
  {
    const double w = wavenumber(*this);
    return w * std::cos(w * x);
  }
  case ModeKind::Cosine:
  {
    const double w = wavenumber(*this);
    return -w * std::sin(w * x);
  }
  case ModeKind::QuadraticBc: return 2.0 * x - scale;
  }
  return 0.0;
}

double BasisMode::antiderivative(double x) const
{
  switch(kind)
  {
  case ModeKind::Constant: return x;
  case ModeKind::Linear: return 0.5 * x * x;
  case ModeKind::Sine:
  {
    // (1 - cos(wx)) / w written with the half-angle form to avoid cancellation
    const double w = wavenumber(*this);
    const double s = std::sin(0.5 * w * x);
    return 2.0 * s * s / w;
  }
  case ModeKind::Cosine:
  {
    const double w = wavenumber(*this);
    return std::sin(w * x) / w;
  }
  case ModeKind::QuadraticBc: return x * x * x / 3.0 - 0.5 * scale * x * x;
  }
  return 0.0;
}

ModalFunction::ModalFunction(std::vector<BasisMode> modes, Eigen::VectorXd weights, double offset)
    : _modes(std::move(modes)), _weights(std::move(weights)), _offset(offset)
{
  if(static_cast<std::size_t>(_weights.size()) != _modes.size())
    throw Error(ErrorCode::InvalidArgument, "modal function needs one weight per mode");
}

ModalFunction::ModalFunction(std::vector<BasisMode> modes, double offset)
    : _modes(std::move(modes)), _weights(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(_modes.size()))),
      _offset(offset)
{
}

double ModalFunction::eval(double x) const
{
  double v = _offset;
  for(std::size_t i = 0; i < _modes.size(); ++i)
    v += _weights[static_cast<Eigen::Index>(i)] * _modes[i].eval(x);
  return v;
}

double ModalFunction::deriv(double x) const
{
  double v = 0.0;
  for(std::size_t i = 0; i < _modes.size(); ++i)
    v += _weights[static_cast<Eigen::Index>(i)] * _modes[i].deriv(x);
  return v;
}

double ModalFunction::integral(double x) const
{
  double v = _offset * x;
  for(std::size_t i = 0; i < _modes.size(); ++i)
    v += _weights[static_cast<Eigen::Index>(i)] * _modes[i].antiderivative(x);
  return v;
}

ModalFunction ModalFunction::with_weights(const Eigen::VectorXd &weights) const
{
  return ModalFunction(_modes, weights, _offset);
}

ModalFunction ModalFunction::with_scale(double length) const
{
  ModalFunction out = *this;
  for(auto &m : out._modes)
    if(m.uses_scale())
      m.scale = length;
  return out;
}

BasisCase parse_basis_case(std::string_view tag)
{
  if(tag == "chamber")
    return BasisCase::Chamber;
  if(tag == "rod2d")
    return BasisCase::Rod2d;
  if(tag == "block-bend")
    return BasisCase::BlockBend;
  if(tag == "block-stretch-rate")
    return BasisCase::BlockStretchRate;
  if(tag == "block-shear")
    return BasisCase::BlockShear;
  if(tag == "block-twist")
    return BasisCase::BlockTwist;
  throw Error(ErrorCode::UnknownCase, "unknown basis case '" + std::string(tag) + "'");
}

ModalFunction make_basis(BasisCase which, double length, int count)
{
  if(!(length > 0.0))
    throw Error(ErrorCode::InvalidArgument, "basis length must be positive");
  if(count < 0)
    throw Error(ErrorCode::InvalidArgument, "mode count must be non-negative");

  std::vector<BasisMode> modes;
  switch(which)
  {
  case BasisCase::Chamber:
    // odd harmonics keep the bulge symmetric about mid-height
    for(int i = 0; i < (count ? count : 5); ++i)
      modes.push_back(BasisMode::sine(2 * i + 1, length));
    return ModalFunction(std::move(modes));
  case BasisCase::Rod2d:
    for(int k = 1; k <= (count ? count : 6); ++k)
      modes.push_back(BasisMode::sine(k, length));
    return ModalFunction(std::move(modes));
  case BasisCase::BlockBend:
    for(int k = 1; k <= (count ? count : 4); ++k)
      modes.push_back(BasisMode::sine(k, length));
    return ModalFunction(std::move(modes));
  case BasisCase::BlockStretchRate: return ModalFunction({BasisMode::quadratic_bc(length)}, 1.0);
  case BasisCase::BlockShear: return ModalFunction({BasisMode::linear()});
  case BasisCase::BlockTwist: return ModalFunction({BasisMode::constant(), BasisMode::linear()});
  }
  throw Error(ErrorCode::UnknownCase, "unknown basis case");
}

} // namespace isokin
