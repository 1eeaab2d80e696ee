// test_config.cpp

#include "isokin/config.hpp"
#include "isokin/error.hpp"

#include <gtest/gtest.h>

using namespace isokin;

namespace
{

ErrorCode code_of(const std::string &text)
{
  try
  {
    parse_config(text);
  }
  catch(const Error &e)
  {
    return e.code();
  }
  ADD_FAILURE() << "config accepted:\n" << text;
  return ErrorCode::CheckFailed;
}

} // namespace

TEST(Config, ShippedConfigsMatchCaseDefaults)
{
  for(const char *name : {"chamber", "rod2d", "rod3d", "block"})
  {
    const CaseConfig cfg = load_config(std::string(ISOKIN_SOURCE_DIR) + "/configs/" + name + ".ini");
    const CaseConfig def = default_case(parse_case(name));
    EXPECT_EQ(config_snapshot(cfg), config_snapshot(def)) << name;
  }
}

TEST(Config, OverridesApply)
{
  const CaseConfig cfg = parse_config(R"(case = block
[geometry]
height = 8
[material]
c10 = 1.5
c01 = 2.5
[solver]
method = projgrad
tol = 1e-10
initial = 0,0,0,0,0,0,0,0,0.01
[targets]
displacement = 0.1 0.2 0.3
gas_vb = 1000
gas_pb = 100
gas_pa = 200
gas_vi = 200
[energy]
grid = 4, 5, 6
seed = 99
)");
  EXPECT_EQ(cfg.geometry.height, 8.0);
  EXPECT_EQ(cfg.material.c10, 1.5);
  EXPECT_EQ(cfg.material_name, "custom");
  EXPECT_EQ(cfg.solver_kind, SolverKind::ProjGrad);
  EXPECT_EQ(cfg.solver.tol, 1e-10);
  ASSERT_TRUE(cfg.initial);
  EXPECT_EQ((*cfg.initial)[8], 0.01);
  EXPECT_EQ(cfg.targets.displacement, Eigen::Vector3d(0.1, 0.2, 0.3));
  EXPECT_EQ(chamber_target_volume(cfg), -300.0);
  EXPECT_EQ(*cfg.energy.grid, (std::array<int, 3>{4, 5, 6}));
  EXPECT_EQ(cfg.energy.seed, 99u);
}

TEST(Config, Rejections)
{
  EXPECT_EQ(code_of("[geometry]\nheight = 5\n"), ErrorCode::InvalidArgument);           // no case
  EXPECT_EQ(code_of("case = sphere\n"), ErrorCode::UnknownCase);
  EXPECT_EQ(code_of("case = block\n[geometry]\ndepth = 3\n"), ErrorCode::InvalidArgument); // unknown key
  EXPECT_EQ(code_of("case = block\n[colour]\nred = 1\n"), ErrorCode::InvalidArgument);    // unknown section
  EXPECT_EQ(code_of("case = block\n[geometry]\nheight = six\n"), ErrorCode::ParseError);
  EXPECT_EQ(code_of("case = block\n[geometry]\nheight = -6\n"), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of("case = block\n[targets]\nrotation = 0.1, 0.1\n"), ErrorCode::ParseError);
  EXPECT_EQ(code_of("case = block\n[modes]\nstages = twist, bend, shear\n"), ErrorCode::OrderViolation);
  EXPECT_EQ(code_of("case = block\n[modes]\nstages = twist, wobble\n"), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of("case = rod3d\n[solver]\nmethod = jacobian\n"), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of("case = chamber\n[targets]\ngas_vb = 1\n"), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of("case = block\n[material]\nname = steel\n"), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of("case = block\n[geometry\n"), ErrorCode::ParseError);
}

TEST(Config, MatrixRoundTrip)
{
  Eigen::MatrixXd M(2, 3);
  M << 1.0 / 3.0, -2e-300, 5, 0.1, 7e10, -0.0;
  EXPECT_EQ(parse_matrix(format_matrix(M)), M);
  EXPECT_THROW(parse_matrix("1,2\n3\n"), Error);
  EXPECT_THROW(parse_matrix(""), Error);
  EXPECT_EQ(parse_vector("1, 2\n3"), Eigen::Vector3d(1, 2, 3));
}
