// modal.hpp
//
// Scalar mode functions m(x) = offset + sum_i p_i phi_i(x) used to parameterize
// every deformation primitive. Evaluation, derivative and antiderivative are all
// closed form.

#pragma once

#include <Eigen/Core>

#include <string_view>
#include <vector>

namespace isokin
{

enum class ModeKind
{
  Constant,    // 1
  Linear,      // x
  Sine,        // sin(k pi x / L)
  Cosine,      // cos(k pi x / L)
  QuadraticBc, // x (x - h)
};

/// One basis function. `scale` is L for the trigonometric kinds and h for
/// QuadraticBc; it is ignored otherwise.
struct BasisMode
{
  ModeKind kind = ModeKind::Constant;
  double scale = 1.0;
  int harmonic = 1;

  static BasisMode constant() { return {ModeKind::Constant, 1.0, 1}; }
  static BasisMode linear() { return {ModeKind::Linear, 1.0, 1}; }
  static BasisMode sine(int k, double length) { return {ModeKind::Sine, length, k}; }
  static BasisMode cosine(int k, double length) { return {ModeKind::Cosine, length, k}; }
  static BasisMode quadratic_bc(double height) { return {ModeKind::QuadraticBc, height, 1}; }

  double eval(double x) const;
  double deriv(double x) const;
  // integral over [0, x]
  double antiderivative(double x) const;

  bool uses_scale() const { return kind != ModeKind::Constant && kind != ModeKind::Linear; }
};

class ModalFunction
{
public:
  ModalFunction() = default;
  ModalFunction(std::vector<BasisMode> modes, Eigen::VectorXd weights, double offset = 0.0);
  /// Zero weights.
  explicit ModalFunction(std::vector<BasisMode> modes, double offset = 0.0);

  double eval(double x) const;
  double deriv(double x) const;
  /// Exact integral over [0, x].
  double integral(double x) const;

  std::size_t size() const { return _modes.size(); }
  const std::vector<BasisMode> &modes() const { return _modes; }
  const Eigen::VectorXd &weights() const { return _weights; }
  double offset() const { return _offset; }

  ModalFunction with_weights(const Eigen::VectorXd &weights) const;
  /// Copy with every scale-carrying mode's scale replaced by `length`.
  ModalFunction with_scale(double length) const;

private:
  std::vector<BasisMode> _modes;
  Eigen::VectorXd _weights;
  double _offset = 0.0;
};

enum class BasisCase
{
  Chamber,
  Rod2d,
  BlockBend,
  BlockStretchRate,
  BlockShear,
  BlockTwist,
};

BasisCase parse_basis_case(std::string_view tag);

/// Boundary-condition-aware basis for a case study, with zero weights.
/// `length` is L for the sine families and h for the stretch rate.
/// `count` overrides the number of sine modes for the sine families (0 keeps
/// the default: 5 odd harmonics for chamber, 6 for rod2d, 4 for block bend).
ModalFunction make_basis(BasisCase which, double length, int count = 0);

} // namespace isokin
