// cases.hpp
//
// The chamber, rod and block case studies: geometry defaults, composites,
// state extractors and targets.

#pragma once

#include "isokin/compose.hpp"
#include "isokin/harness.hpp"
#include "isokin/mechanics.hpp"
#include "isokin/solver.hpp"

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace isokin
{

enum class CaseKind
{
  Chamber,
  Rod2d,
  Rod3d,
  Block,
};

CaseKind parse_case(std::string_view tag);
std::string_view to_string(CaseKind kind);

enum class SolverKind
{
  Jacobian,
  ProjGrad,
  Se3,
};

SolverKind parse_solver(std::string_view tag);
std::string_view to_string(SolverKind kind);

/// Lengths in cm. Which fields matter depends on the case.
struct CaseGeometry
{
  double height = 10.0;
  double r_in = 1.6;   // chamber inner radius
  double wall = 0.2;   // chamber wall thickness
  double radius = 0.45; // rod radius
  double wx = 3.0;     // block widths
  double wy = 3.0;
};

struct ModeSettings
{
  /// Innermost first: twist, stretch, shear, bend, source.
  std::vector<std::string> stages;
  int count = 0;                  // sine modes for bend/source; 0 = case default
  bool counter_rotate_base = true;
  int backbone_steps = 1000;
};

/// Optional ideal-gas correction of the chamber inflation volume.
struct GasCorrection
{
  double vb, pb, pa, vi;
};

struct CaseTargets
{
  double volume = 105.0; // cm^3
  std::optional<GasCorrection> gas;
  Eigen::Vector3d displacement = Eigen::Vector3d::Zero(); // top-plane centre, cm
  Eigen::Vector3d rotation = Eigen::Vector3d::Zero();     // rotation vector, rad
};

struct EnergySettings
{
  std::optional<std::array<int, 3>> grid; // domain default when unset
  int sample_count = 0;                   // 0 = 2 m(m+1)/2
  double magnitude = 1e-3;
  std::uint64_t seed = 0;
};

struct CaseConfig
{
  CaseKind kind = CaseKind::Block;
  CaseGeometry geometry;
  std::string material_name = "ecoflex-00-30";
  Material material{5.6, 6.3};
  ModeSettings modes;
  SolverKind solver_kind = SolverKind::Jacobian;
  IKOptions solver;
  /// Starting weights; undeformed when unset. Picks the solution branch.
  std::optional<Eigen::VectorXd> initial;
  CaseTargets targets;
  EnergySettings energy;

  /// Throws InvalidArgument for non-positive geometry or unsupported stages.
  void validate() const;
};

/// Reference geometry, material, modes and boundary conditions for each case.
CaseConfig default_case(CaseKind kind);

/// Undeformed composite with the configured stages. Not for rod3d, whose
/// composite follows the solved backbone.
CompositeDeformation build_composite(const CaseConfig &cfg);
/// Material-frame twist followed by Bend3D along `curve`.
CompositeDeformation rod3d_composite(std::shared_ptr<const BackboneCurve> curve);

QuadratureDomain case_domain(const CaseConfig &cfg);
SurfaceGrid case_surface(const CaseConfig &cfg, int nu, int nv);
/// True when x lies on the boundary of the reference body (relative tol 1e-6).
bool on_case_boundary(const CaseConfig &cfg, const Eigen::Vector3d &x);

/// chamber: [volume]; rod2d: [t_y, t_z, r_x]; block: [t, log R].
VectorState case_vector_state(const CaseConfig &cfg, const CompositeDeformation &base);
Eigen::VectorXd case_vector_target(const CaseConfig &cfg);
PoseState case_pose_state(const CaseConfig &cfg, const CompositeDeformation &base);
/// (exp(hat(rotation)), (0, 0, h) + displacement).
RigidPose case_pose_target(const CaseConfig &cfg);
/// Chamber target volume, after the gas correction when one is configured.
double chamber_target_volume(const CaseConfig &cfg);

struct CaseSolution
{
  CompositeDeformation deformation; // at the solved weights
  IKResult result;
  std::shared_ptr<const BackboneCurve> curve; // rod3d only
};

/// Solves the configured case from undeformed weights. `weight` overrides the
/// solver's weight matrix.
CaseSolution solve_case(const CaseConfig &cfg, std::optional<Eigen::MatrixXd> weight = std::nullopt);

} // namespace isokin
