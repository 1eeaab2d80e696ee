// harness.cpp

#include "isokin/harness.hpp"
#include "isokin/error.hpp"

#include <Eigen/Geometry>

#include <cmath>
#include <numbers>
#include <unordered_map>

namespace isokin
{

RigidPose top_plane_pose(const CompositeDeformation &comp, double h)
{
  const Eigen::Vector3d c = comp.apply({0.0, 0.0, h});
  const Eigen::Vector3d e1 = comp.apply({1.0, 0.0, h}) - c;
  const Eigen::Vector3d e2 = comp.apply({0.0, 1.0, h}) - c;
  const double l1 = e1.norm(), l2 = e2.norm();
  if(std::abs(l1 - 1.0) > 1e-6 || std::abs(l2 - 1.0) > 1e-6)
    throw Error(ErrorCode::NonRigidTopPlane, "top plane edges deformed to lengths " + std::to_string(l1) + " and " +
                                                 std::to_string(l2));
  const Eigen::Vector3d r1 = e1 / l1;
  const Eigen::Vector3d r2 = (e2 - r1.dot(e2) * r1).normalized();
  RigidPose g;
  g.rotation.col(0) = r1;
  g.rotation.col(1) = r2;
  g.rotation.col(2) = r1.cross(r2);
  g.translation = c;
  return g;
}

double chamber_volume_change(const ModalFunction &strength, double length)
{
  constexpr int kChecks = 256;
  const double scale = std::max(1.0, strength.weights().cwiseAbs().sum() + std::abs(strength.offset()));
  for(int i = 0; i <= kChecks; ++i)
  {
    const double x = length * i / kChecks;
    if(strength.eval(x) < -1e-12 * scale)
      throw Error(ErrorCode::NegativeCavity, "source strength is negative at x3 = " + std::to_string(x));
  }
  return std::numbers::pi * strength.integral(length);
}

double gas_corrected_volume(double Vb, double Pb, double Pa, double Vi)
{
  if(!(Pb > 0.0 && Pa > 0.0))
    throw Error(ErrorCode::InvalidArgument, "pressures must be positive");
  const double Va = Vb * Pb / Pa;
  return Vi - (Vb - Va);
}

ErrorReport error_metric(const NodeSet &ref, const NodeSet &a, const NodeSet &f)
{
  if(a.size() != ref.size() || f.size() != ref.size())
    throw Error(ErrorCode::IdMismatch, "node sets have different sizes");
  std::unordered_map<long long, std::size_t> ia, iff;
  for(std::size_t i = 0; i < a.size(); ++i)
    ia[a.ids[i]] = i;
  for(std::size_t i = 0; i < f.size(); ++i)
    iff[f.ids[i]] = i;

  ErrorReport rep;
  rep.ids = ref.ids;
  rep.e.resize(ref.size());
  rep.d.resize(ref.size());
  double num = 0.0, den = 0.0;
  for(std::size_t i = 0; i < ref.size(); ++i)
  {
    const auto ja = ia.find(ref.ids[i]);
    const auto jf = iff.find(ref.ids[i]);
    if(ja == ia.end() || jf == iff.end())
      throw Error(ErrorCode::IdMismatch, "node " + std::to_string(ref.ids[i]) + " is missing", i);
    const Eigen::Vector3d &ai = a.points[ja->second];
    const double e2 = (ai - f.points[jf->second]).squaredNorm();
    const double d2 = (ai - ref.points[i]).squaredNorm();
    num += e2;
    den += d2;
    rep.e[i] = std::sqrt(e2);
    rep.d[i] = std::sqrt(d2);
  }
  if(!(den > 0.0))
    throw Error(ErrorCode::ZeroDisplacement, "reference and deformed nodes coincide; E is undefined");
  rep.E = std::sqrt(num / den);
  return rep;
}

SurfaceGrid cylinder_surface(double radius, double h, int nu, int nv)
{
  if(nu < 2 || nv < 2)
    throw Error(ErrorCode::InvalidArgument, "surface grid needs at least 2 x 2 points");
  SurfaceGrid g{nu, nv, {}};
  g.points.reserve(static_cast<std::size_t>(nu) * nv);
  for(int j = 0; j < nv; ++j)
    for(int i = 0; i < nu; ++i)
    {
      const double th = 2.0 * std::numbers::pi * i / (nu - 1);
      g.points.emplace_back(radius * std::cos(th), radius * std::sin(th), h * j / (nv - 1));
    }
  return g;
}

SurfaceGrid block_surface(double wx, double wy, double h, int nu, int nv)
{
  if(nu < 2 || nv < 2)
    throw Error(ErrorCode::InvalidArgument, "surface grid needs at least 2 x 2 points");
  const double perimeter = 2.0 * (wx + wy);
  // counter-clockwise from (-wx/2, -wy/2)
  auto at = [&](double u) -> Eigen::Vector2d {
    double s = u * perimeter;
    if(s <= wx)
      return {-0.5 * wx + s, -0.5 * wy};
    s -= wx;
    if(s <= wy)
      return {0.5 * wx, -0.5 * wy + s};
    s -= wy;
    if(s <= wx)
      return {0.5 * wx - s, 0.5 * wy};
    s -= wx;
    return {-0.5 * wx, 0.5 * wy - std::min(s, wy)};
  };
  SurfaceGrid g{nu, nv, {}};
  g.points.reserve(static_cast<std::size_t>(nu) * nv);
  for(int j = 0; j < nv; ++j)
    for(int i = 0; i < nu; ++i)
    {
      const Eigen::Vector2d xy = at(static_cast<double>(i) / (nu - 1));
      g.points.emplace_back(xy.x(), xy.y(), h * j / (nv - 1));
    }
  return g;
}

NodeSet deform_points(const CompositeDeformation &comp, const std::vector<Eigen::Vector3d> &reference, NodeLabel label)
{
  NodeSet out;
  out.label = label;
  out.ids.reserve(reference.size());
  out.points.reserve(reference.size());
  for(std::size_t i = 0; i < reference.size(); ++i)
  {
    out.ids.push_back(static_cast<long long>(i) + 1);
    out.points.push_back(comp.apply(reference[i]));
  }
  return out;
}

SurfaceGrid deform_grid(const CompositeDeformation &comp, const SurfaceGrid &grid)
{
  SurfaceGrid out = grid;
  for(auto &p : out.points)
    p = comp.apply(p);
  return out;
}

void export_points(const CompositeDeformation &comp, const std::vector<Eigen::Vector3d> &reference,
                   const std::filesystem::path &path)
{
  write_nodes(path, deform_points(comp, reference));
}

void export_points(const CompositeDeformation &comp, const SurfaceGrid &grid, const std::filesystem::path &path,
                   PointFormat format)
{
  if(format == PointFormat::Csv)
    export_points(comp, grid.points, path);
  else
    write_text(path, format_obj(deform_grid(comp, grid)));
}

} // namespace isokin
