// test_liegroup.cpp

#include "isokin/error.hpp"
#include "isokin/liegroup.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace isokin;

namespace
{

Twist6 random_twist(std::mt19937_64 &rng, double rotMax = 2.5)
{
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Twist6 xi;
  for(int i = 0; i < 6; ++i)
    xi[i] = u(rng);
  xi.head<3>() *= rotMax / std::sqrt(3.0);
  return xi;
}

} // namespace

TEST(LieGroup, HatVeeRoundTrip)
{
  std::mt19937_64 rng(1);
  for(int i = 0; i < 50; ++i)
  {
    const Twist6 xi = random_twist(rng);
    EXPECT_EQ(vee6(hat6(xi)), xi);
    EXPECT_EQ(vee3(hat3(xi.head<3>())), xi.head<3>());
  }
}

TEST(LieGroup, VeeRejectsNonSkew)
{
  Eigen::Matrix3d S = hat3(Eigen::Vector3d(1, 2, 3));
  S(0, 1) += 0.1;
  try
  {
    vee3(S);
    FAIL();
  }
  catch(const Error &e)
  {
    EXPECT_EQ(e.code(), ErrorCode::NotSkew);
  }
}

TEST(LieGroup, ExpLogRoundTrip)
{
  std::mt19937_64 rng(2);
  for(int i = 0; i < 100; ++i)
  {
    const Twist6 xi = random_twist(rng);
    EXPECT_LT((log_se3(exp_se3(xi)) - xi).norm(), 1e-9);
    EXPECT_TRUE(is_rotation(exp_se3(xi).rotation));
  }
}

TEST(LieGroup, ExpMatchesMatrixExponential)
{
  // Taylor series of the 4x4 hat, independent of the closed form
  std::mt19937_64 rng(3);
  for(int n = 0; n < 10; ++n)
  {
    const Twist6 xi = random_twist(rng, 1.0);
    const Eigen::Matrix4d X = hat6(xi);
    Eigen::Matrix4d term = Eigen::Matrix4d::Identity(), sum = Eigen::Matrix4d::Identity();
    for(int k = 1; k < 40; ++k)
    {
      term = term * X / k;
      sum += term;
    }
    EXPECT_LT((exp_se3(xi).matrix() - sum).norm(), 1e-12);
  }
}

TEST(LieGroup, SmallAngleBranches)
{
  const Eigen::Vector3d w(1e-9, -2e-9, 5e-10);
  EXPECT_LT((log_so3(exp_so3(w)) - w).norm(), 1e-18);
  EXPECT_EQ(log_so3(Eigen::Matrix3d::Identity()), Eigen::Vector3d::Zero());
}

TEST(LieGroup, LogNearPiThrows)
{
  const Eigen::Matrix3d R = exp_so3(Eigen::Vector3d(0.0, 0.0, M_PI - 1e-8));
  try
  {
    log_so3(R);
    FAIL();
  }
  catch(const Error &e)
  {
    EXPECT_EQ(e.code(), ErrorCode::AngleNearPi);
  }
}

TEST(LieGroup, AdjointIsHomomorphism)
{
  std::mt19937_64 rng(4);
  for(int i = 0; i < 100; ++i)
  {
    const RigidPose a = exp_se3(random_twist(rng)), b = exp_se3(random_twist(rng));
    EXPECT_LT((adjoint(a * b) - adjoint(a) * adjoint(b)).norm(), 1e-10);
  }
}

TEST(LieGroup, AdjointConjugatesTwists)
{
  std::mt19937_64 rng(5);
  const RigidPose g = exp_se3(random_twist(rng));
  const Twist6 xi = random_twist(rng);
  const Eigen::Matrix4d lhs = g.matrix() * hat6(xi) * g.inverse().matrix();
  EXPECT_LT((vee6(lhs) - adjoint(g) * xi).norm(), 1e-12);
}

TEST(LieGroup, InverseAndOrthonormalize)
{
  std::mt19937_64 rng(6);
  const RigidPose g = exp_se3(random_twist(rng));
  EXPECT_LT(((g * g.inverse()).matrix() - Eigen::Matrix4d::Identity()).norm(), 1e-14);
  Eigen::Matrix3d R = g.rotation;
  R(0, 0) += 1e-7;
  EXPECT_TRUE(is_rotation(orthonormalize(R), 1e-12));
  EXPECT_LT((rot_z(0.3) - exp_so3(Eigen::Vector3d(0, 0, 0.3))).norm(), 1e-15);
}
