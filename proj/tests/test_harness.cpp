// test_harness.cpp

#include "fixtures.hpp"
#include "oracles.hpp"

#include "isokin/cases.hpp"
#include "isokin/error.hpp"
#include "isokin/harness.hpp"

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include <filesystem>

using namespace isokin;

namespace
{

NodeSet make_set(std::vector<long long> ids, std::vector<Eigen::Vector3d> pts)
{
  NodeSet s;
  s.ids = std::move(ids);
  s.points = std::move(pts);
  return s;
}

NodeSet random_set(std::mt19937_64 &rng, int n, double spread)
{
  NodeSet s;
  for(int i = 0; i < n; ++i)
  {
    s.ids.push_back(100 + i);
    s.points.push_back(fixture::small_vector(rng, 3, spread));
  }
  return s;
}

ErrorCode code_of(const std::function<void()> &f)
{
  try
  {
    f();
  }
  catch(const Error &e)
  {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::CheckFailed;
}

} // namespace

TEST(Harness, TopPlaneOfUndeformedBlock)
{
  const CompositeDeformation c = build_composite(default_case(CaseKind::Block));
  const RigidPose g = top_plane_pose(c, 6.0);
  EXPECT_EQ(g.rotation, Eigen::Matrix3d::Identity());
  EXPECT_LT((g.translation - Eigen::Vector3d(0, 0, 6)).norm(), 1e-15);
}

TEST(Harness, TopPlaneOfPureTwistAndShear)
{
  CaseConfig cfg = default_case(CaseKind::Block);
  const double h = 6.0, theta = 0.4;
  Eigen::VectorXd p = Eigen::VectorXd::Zero(9);
  p[1] = theta / h;
  RigidPose g = top_plane_pose(build_composite(cfg).with_parameters(p), h);
  EXPECT_LT((g.rotation - rot_z(theta)).norm(), 1e-12);
  EXPECT_LT((g.translation - Eigen::Vector3d(0, 0, h)).norm(), 1e-12);

  p.setZero();
  p[3] = 0.05;
  g = top_plane_pose(build_composite(cfg).with_parameters(p), h);
  EXPECT_LT((g.translation - Eigen::Vector3d(0.05 * h, 0, h)).norm(), 1e-12);
  EXPECT_LT((g.rotation - Eigen::Matrix3d::Identity()).norm(), 1e-12);
}

TEST(Harness, TopPlaneRotationIsOrthonormal)
{
  std::mt19937_64 rng(51);
  for(int i = 0; i < 20; ++i)
  {
    const RigidPose g = top_plane_pose(fixture::random_block(rng, 0.1), 6.0);
    EXPECT_LT((g.rotation.transpose() * g.rotation - Eigen::Matrix3d::Identity()).norm(), 1e-8);
  }
}

TEST(Harness, NonRigidTopPlaneIsDetected)
{
  // curvature that does not vanish at the top squeezes the plane along x2
  std::vector<DeformationPrimitive> st;
  st.emplace_back(Bend2D(ModalFunction({BasisMode::constant()}, Eigen::VectorXd::Constant(1, 0.2)), 6.0));
  EXPECT_EQ(code_of([&] { top_plane_pose(CompositeDeformation(std::move(st)), 6.0); }), ErrorCode::NonRigidTopPlane);
}

TEST(Harness, ChamberVolumeClosedForms)
{
  const double L = 10.0;
  EXPECT_EQ(chamber_volume_change(make_basis(BasisCase::Chamber, L), L), 0.0);
  const ModalFunction one =
      ModalFunction({BasisMode::sine(1, L)}, Eigen::VectorXd::Constant(1, 2.5));
  EXPECT_NEAR(chamber_volume_change(one, L), 2.0 * 2.5 * L, 1e-12);
  const ModalFunction neg = ModalFunction({BasisMode::sine(1, L)}, Eigen::VectorXd::Constant(1, -0.1));
  EXPECT_EQ(code_of([&] { chamber_volume_change(neg, L); }), ErrorCode::NegativeCavity);
}

TEST(Harness, ChamberVolumeMatchesSurfaceIntegral)
{
  std::mt19937_64 rng(52);
  const CaseConfig cfg = default_case(CaseKind::Chamber);
  const CompositeDeformation base = build_composite(cfg);
  for(int i = 0; i < 20; ++i)
  {
    // rejection-sample strengths that stay non-negative
    CompositeDeformation c;
    double analytic = 0.0;
    for(;;)
    {
      Eigen::VectorXd p = fixture::small_vector(rng, 5, 0.3);
      p[0] = fixture::uniform(rng, 1.5, 5.0);
      c = base.with_parameters(p);
      try
      {
        analytic = chamber_volume_change(std::get<Source>(c.stages()[0]).strength, 10.0);
        break;
      }
      catch(const Error &)
      {
      }
    }
    const double surface = oracle::cavity_volume_change(c, 1.6, 10.0);
    EXPECT_NEAR(surface, analytic, 0.005 * analytic);
  }
}

TEST(Harness, GasCorrection)
{
  EXPECT_DOUBLE_EQ(gas_corrected_volume(1000, 100, 100, 200), 200.0);
  EXPECT_DOUBLE_EQ(gas_corrected_volume(1000, 100, 200, 200), -300.0);
  EXPECT_LE(gas_corrected_volume(1000, 100, 150, 0), 0.0);
}

TEST(Harness, MetricExamples)
{
  const NodeSet o = make_set({1}, {Eigen::Vector3d(0, 0, 0)});
  const NodeSet a = make_set({1}, {Eigen::Vector3d(2, 0, 0)});
  const NodeSet f = make_set({1}, {Eigen::Vector3d(2, 1, 0)});
  EXPECT_DOUBLE_EQ(error_metric(o, a, f).E, 0.5);
  EXPECT_EQ(error_metric(o, a, a).E, 0.0);
  EXPECT_EQ(code_of([&] { error_metric(o, o, f); }), ErrorCode::ZeroDisplacement);
  EXPECT_EQ(code_of([&] { error_metric(o, a, make_set({2}, {Eigen::Vector3d::Zero()})); }), ErrorCode::IdMismatch);
}

TEST(Harness, MetricMatchesBruteForce)
{
  std::mt19937_64 rng(53);
  NodeSet o = random_set(rng, 10, 1.0), a = o, f = o;
  for(auto &x : a.points)
    x += fixture::small_vector(rng, 3, 0.5);
  for(auto &x : f.points)
    x += fixture::small_vector(rng, 3, 0.5);
  std::reverse(f.ids.begin(), f.ids.end()); // order independence: ids, not positions
  std::reverse(f.points.begin(), f.points.end());
  const ErrorReport r = error_metric(o, a, f);
  EXPECT_EQ(r.E, oracle::brute_force_metric(o, a, f));
  EXPECT_EQ(r.ids, o.ids);
}

TEST(Harness, MetricIsScaleInvariant)
{
  std::mt19937_64 rng(54);
  NodeSet o = random_set(rng, 10, 1.0), a = o, f = o;
  for(std::size_t i = 0; i < o.size(); ++i)
  {
    a.points[i] += fixture::small_vector(rng, 3, 0.5);
    f.points[i] += fixture::small_vector(rng, 3, 0.5);
  }
  const double E = error_metric(o, a, f).E;
  for(double s : {0.1, 3.0, 100.0})
  {
    NodeSet as = a, fs = f;
    for(std::size_t i = 0; i < o.size(); ++i)
    {
      as.points[i] = o.points[i] + s * (a.points[i] - o.points[i]);
      fs.points[i] = o.points[i] + s * (f.points[i] - o.points[i]);
    }
    EXPECT_NEAR(error_metric(o, as, fs).E, E, 1e-12);
  }
}

TEST(Harness, IngestWellFormedAndErrors)
{
  EXPECT_EQ(parse_nodes("id,x,y,z\n1,0,0,0\n2,1.5,-2,3e-3\n").size(), 2u);
  try
  {
    parse_nodes("id,x,y,z\n1,0,0,0\n1,1,1,1\n");
    FAIL();
  }
  catch(const Error &e)
  {
    EXPECT_EQ(e.code(), ErrorCode::DuplicateId);
    EXPECT_EQ(e.index(), std::optional<std::size_t>(3));
  }
  EXPECT_EQ(parse_nodes("id,x,y,z\n1,0,0,0\n1,1,1,1\n", false).size(), 1u);
  EXPECT_EQ(code_of([] { parse_nodes("id,x,y,z\n1,nan,0,0\n"); }), ErrorCode::NonFinite);
  EXPECT_EQ(code_of([] { parse_nodes("1,0,0,0\n"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { parse_nodes("id,x,y,z\n1,0,0\n"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { parse_nodes("id,x,y,z\n1,0,0,0,\n"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { ingest_nodes("/nonexistent/nodes.csv"); }), ErrorCode::IoError);
}

TEST(Harness, CsvRoundTripIsLossless)
{
  std::mt19937_64 rng(55);
  const NodeSet s = random_set(rng, 50, 3.7);
  const auto path = std::filesystem::temp_directory_path() / "isokin_roundtrip.csv";
  write_nodes(path, s);
  const NodeSet back = ingest_nodes(path);
  EXPECT_EQ(back.ids, s.ids);
  for(std::size_t i = 0; i < s.size(); ++i)
    EXPECT_EQ(back.points[i], s.points[i]);
  EXPECT_EQ(format_nodes(back), format_nodes(s));
  std::filesystem::remove(path);
}

TEST(Harness, ObjFaceCount)
{
  const SurfaceGrid g = block_surface(3, 3, 6, 9, 5);
  const std::string obj = format_obj(g);
  int v = 0, f = 0;
  std::istringstream in(obj);
  std::string line;
  while(std::getline(in, line))
  {
    v += line.rfind("v ", 0) == 0;
    f += line.rfind("f ", 0) == 0;
  }
  EXPECT_EQ(v, 45);
  EXPECT_EQ(f, 8 * 4);
  EXPECT_EQ(cylinder_surface(1.0, 2.0, 7, 3).points.size(), 21u);
}

TEST(Harness, IdentityExportIsVerbatim)
{
  std::vector<Eigen::Vector3d> ref;
  for(const auto &q : quadrature_points(BlockDomain{3, 3, 6, 2, 2, 2}))
    ref.push_back(q.x);
  ASSERT_EQ(ref.size(), 8u);
  const CompositeDeformation c = build_composite(default_case(CaseKind::Block));
  const auto path = std::filesystem::temp_directory_path() / "isokin_identity.csv";
  export_points(c, ref, path);
  const NodeSet back = ingest_nodes(path);
  for(std::size_t i = 0; i < ref.size(); ++i)
    EXPECT_EQ(back.points[i], ref[i]);
  std::filesystem::remove(path);
}

TEST(Harness, ExportedChamberComparedToItself)
{
  const CaseConfig cfg = default_case(CaseKind::Chamber);
  Eigen::VectorXd p = Eigen::VectorXd::Zero(5);
  p[0] = 3.0;
  const CompositeDeformation c = build_composite(cfg).with_parameters(p);
  const SurfaceGrid wall = cylinder_surface(1.6, 10.0, 16, 11);
  const auto path = std::filesystem::temp_directory_path() / "isokin_wall.csv";
  export_points(c, wall, path, PointFormat::Csv);
  const NodeSet deformed = ingest_nodes(path);
  NodeSet ref = deformed;
  ref.points = wall.points;
  EXPECT_EQ(error_metric(ref, deformed, deformed).E, 0.0);
  std::filesystem::remove(path);
}

TEST(Harness, CaseBoundaryClassification)
{
  const CaseConfig b = default_case(CaseKind::Block);
  EXPECT_TRUE(on_case_boundary(b, Eigen::Vector3d(1.5, 0.2, 3)));
  EXPECT_TRUE(on_case_boundary(b, Eigen::Vector3d(0.1, 0.2, 6)));
  EXPECT_FALSE(on_case_boundary(b, Eigen::Vector3d(0.1, 0.2, 3)));
  const CaseConfig c = default_case(CaseKind::Chamber);
  EXPECT_TRUE(on_case_boundary(c, Eigen::Vector3d(1.8, 0, 4)));
  EXPECT_FALSE(on_case_boundary(c, Eigen::Vector3d(1.7, 0, 4)));
}
