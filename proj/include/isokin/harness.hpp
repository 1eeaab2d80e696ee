// harness.hpp
//
// Case-study state extractors, the FEM/experiment comparison metric and node
// data exchange (CSV point sets, OBJ surface meshes).

#pragma once

#include "isokin/compose.hpp"
#include "isokin/liegroup.hpp"
#include "isokin/modal.hpp"

#include <Eigen/Core>

#include <filesystem>
#include <string>
#include <vector>

namespace isokin
{

/// Pose of the deformed top plane x3 = h: translation is the image of the
/// plane's centre, rotation comes from Gram-Schmidt on the images of unit
/// in-plane offsets. Throws NonRigidTopPlane when either edge stretches by
/// more than 1e-6.
RigidPose top_plane_pose(const CompositeDeformation &comp, double h);

/// pi int_0^L m_c, the volume enclosed by the source-deformed inner wall minus
/// the reference volume. Throws NegativeCavity when m_c < 0 somewhere on [0, L].
double chamber_volume_change(const ModalFunction &strength, double length);

/// V_d = Vi - (Vb - Vb Pb / Pa): the inflation volume left after the gas in
/// the supply volume Vb is compressed from Pb to Pa.
double gas_corrected_volume(double Vb, double Pb, double Pa, double Vi);

enum class NodeLabel
{
  Fem,
  Primitive,
  Experiment,
};

struct NodeSet
{
  std::vector<long long> ids;
  std::vector<Eigen::Vector3d> points;
  NodeLabel label = NodeLabel::Fem;

  std::size_t size() const { return ids.size(); }
};

struct ErrorReport
{
  double E = 0.0;
  std::vector<long long> ids;
  std::vector<double> e; // ||a_i - f_i||
  std::vector<double> d; // ||a_i - o_i||
};

/// E = sqrt(sum ||a_i - f_i||^2 / sum ||a_i - o_i||^2) over the nodes of `ref`,
/// in its order. Throws IdMismatch when a or f lacks one of ref's ids or sizes
/// differ, ZeroDisplacement when the denominator vanishes.
ErrorReport error_metric(const NodeSet &ref, const NodeSet &a, const NodeSet &f);

/// Parses `id,x,y,z` CSV. Strict mode rejects non-finite coordinates
/// (NonFinite) and repeated ids (DuplicateId); both carry the 1-based line.
NodeSet ingest_nodes(const std::filesystem::path &path, bool strict = true, NodeLabel label = NodeLabel::Fem);
NodeSet parse_nodes(const std::string &text, bool strict = true, NodeLabel label = NodeLabel::Fem);

/// 17 significant digits, LF line endings.
std::string format_nodes(const NodeSet &nodes);
void write_nodes(const std::filesystem::path &path, const NodeSet &nodes);

/// Structured nu x nv grid, point (i, j) at index j * nu + i.
struct SurfaceGrid
{
  int nu = 0;
  int nv = 0;
  std::vector<Eigen::Vector3d> points;
};

/// Side surfaces of x3-extruded cross-sections, u around the section and v up
/// the height. The seam column is duplicated, not wrapped.
SurfaceGrid cylinder_surface(double radius, double h, int nu, int nv);
SurfaceGrid block_surface(double wx, double wy, double h, int nu, int nv);

/// `v` lines then (nu-1)(nv-1) quad `f` lines.
std::string format_obj(const SurfaceGrid &grid);

/// Applies comp to every point, keeping ids 1..n in order.
NodeSet deform_points(const CompositeDeformation &comp, const std::vector<Eigen::Vector3d> &reference,
                      NodeLabel label = NodeLabel::Primitive);
SurfaceGrid deform_grid(const CompositeDeformation &comp, const SurfaceGrid &grid);

enum class PointFormat
{
  Csv,
  Obj,
};

/// CSV writes every point; OBJ needs a grid.
void export_points(const CompositeDeformation &comp, const std::vector<Eigen::Vector3d> &reference,
                   const std::filesystem::path &path);
void export_points(const CompositeDeformation &comp, const SurfaceGrid &grid, const std::filesystem::path &path,
                   PointFormat format);

void write_text(const std::filesystem::path &path, const std::string &text);

} // namespace isokin
