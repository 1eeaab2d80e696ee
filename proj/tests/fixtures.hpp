// fixtures.hpp
//
// Random primitives and sample points shared by the unit and acceptance tests.

#pragma once

#include "isokin/backbone.hpp"
#include "isokin/cases.hpp"
#include "isokin/primitives.hpp"

#include <Eigen/Dense>

#include <random>
#include <string>
#include <vector>

namespace fixture
{

inline double uniform(std::mt19937_64 &rng, double lo, double hi)
{
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Eigen::VectorXd small_vector(std::mt19937_64 &rng, Eigen::Index n, double mag)
{
  Eigen::VectorXd v(n);
  for(Eigen::Index i = 0; i < n; ++i)
    v[i] = uniform(rng, -mag, mag);
  return v;
}

struct Sample
{
  std::string name;
  isokin::DeformationPrimitive prim;
  // draws a point inside the body the primitive is exercised on
  std::function<Eigen::Vector3d(std::mt19937_64 &)> point;
};

inline Eigen::Vector3d block_point(std::mt19937_64 &rng, double w = 3.0, double h = 6.0)
{
  return {uniform(rng, -w / 2, w / 2), uniform(rng, -w / 2, w / 2), uniform(rng, 0.0, h)};
}

inline Eigen::Vector3d shell_point(std::mt19937_64 &rng, double r0, double r1, double h)
{
  const double r = uniform(rng, r0, r1), th = uniform(rng, 0.0, 2.0 * M_PI);
  return {r * std::cos(th), r * std::sin(th), uniform(rng, 0.0, h)};
}

inline std::shared_ptr<const isokin::BackboneCurve> random_backbone(std::mt19937_64 &rng, double L = 15.0)
{
  const double a = uniform(rng, -0.1, 0.1), b = uniform(rng, -0.1, 0.1), c = uniform(rng, -0.05, 0.05);
  return std::make_shared<const isokin::BackboneCurve>(
      isokin::integrate_backbone([=](double s) { return Eigen::Vector3d(a + 0.05 * std::sin(s / L * M_PI), b, c); },
                                 L, 1000));
}

/// One instance of each of the six primitives with small random weights.
inline std::vector<Sample> random_primitives(std::mt19937_64 &rng)
{
  using namespace isokin;
  std::vector<Sample> out;
  const double h = 6.0;

  ModalFunction rate = make_basis(BasisCase::BlockStretchRate, h);
  out.push_back({"elongation", Elongation{rate.with_weights(small_vector(rng, 1, 0.02))},
                 [](std::mt19937_64 &r) { return block_point(r); }});

  ModalFunction ang = make_basis(BasisCase::BlockTwist, h);
  out.push_back({"twist", Twist{ang.with_weights(small_vector(rng, 2, 0.1))},
                 [](std::mt19937_64 &r) { return block_point(r); }});

  ModalFunction sh = make_basis(BasisCase::BlockShear, h);
  out.push_back({"shear",
                 Shear{sh.with_weights(small_vector(rng, 1, 0.1)), sh.with_weights(small_vector(rng, 1, 0.1))},
                 [](std::mt19937_64 &r) { return block_point(r); }});

  ModalFunction k = make_basis(BasisCase::BlockBend, h);
  out.push_back({"bend2d", Bend2D(k.with_weights(small_vector(rng, 4, 0.05)), h, uniform(rng, -1.0, 1.0)),
                 [](std::mt19937_64 &r) { return block_point(r); }});

  out.push_back({"bend3d", Bend3D{random_backbone(rng)},
                 [](std::mt19937_64 &r) { return shell_point(r, 0.0, 0.45, 15.0); }});

  ModalFunction c = make_basis(BasisCase::Chamber, 10.0);
  out.push_back({"source", Source{c.with_weights(small_vector(rng, 5, 0.3))},
                 [](std::mt19937_64 &r) { return shell_point(r, 1.6, 1.8, 10.0); }});
  return out;
}

inline isokin::CompositeDeformation random_block(std::mt19937_64 &rng, double mag = 0.05)
{
  using namespace isokin;
  const CompositeDeformation base = build_composite(default_case(CaseKind::Block));
  return base.with_parameters(base.parameters() + small_vector(rng, base.parameter_count(), mag));
}

} // namespace fixture
