// compose.hpp
//
// Ordered composition of primitives, f = f_n(...f_1(x)...), with chain-rule
// gradients and a flat view of every free modal weight.

#pragma once

#include "isokin/primitives.hpp"

#include <Eigen/Core>

#include <optional>
#include <string>
#include <vector>

namespace isokin
{

struct CompositeOptions
{
  /// Reference height h. When set, a Bend2D stage's length (and its basis
  /// scale) follows the elongated height m_e(h) of the preceding Elongation
  /// stage, or h when there is none.
  std::optional<double> reference_height;
  /// Post-multiply by Rz(-theta_0), theta_0 the summed twist angle at x3 = 0,
  /// so a constant twist mode rotates the bending plane instead of the base.
  bool counter_rotate_base = false;
};

/// Where one modal function's weights live inside the flat parameter vector.
struct ParamSlice
{
  std::size_t stage;
  std::string field;
  std::size_t offset;
  std::size_t count;
};

class CompositeDeformation
{
public:
  CompositeDeformation() = default;
  explicit CompositeDeformation(std::vector<DeformationPrimitive> stages, CompositeOptions options = {});

  const std::vector<DeformationPrimitive> &stages() const { return _stages; }
  const CompositeOptions &options() const { return _options; }

  /// Throws OrderViolation(stage) if a bend is followed by another stage or
  /// more than one bend is present.
  void validate_order() const;

  bool valid(const Eigen::Vector3d &x) const;
  /// SingularInput errors carry the index of the failing stage.
  Eigen::Vector3d apply(const Eigen::Vector3d &x) const;
  Eigen::Matrix3d gradient(const Eigen::Vector3d &x) const;
  void apply_with_gradient(const Eigen::Vector3d &x, Eigen::Vector3d &y, Eigen::Matrix3d &F) const;

  std::size_t parameter_count() const { return _parameter_count; }
  const std::vector<ParamSlice> &parameter_map() const { return _map; }
  Eigen::VectorXd parameters() const;
  /// New composite with the weights replaced; this one is left untouched.
  CompositeDeformation with_parameters(const Eigen::VectorXd &p) const;

  double base_rotation() const;

private:
  void build_map();
  void sync_bend_length();

  std::vector<DeformationPrimitive> _stages;
  CompositeOptions _options;
  std::vector<ParamSlice> _map;
  std::size_t _parameter_count = 0;
};

} // namespace isokin
