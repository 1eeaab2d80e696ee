// oracles.hpp
//
// Independent reference computations for tests. None of these call the code
// they check.

#pragma once

#include "isokin/compose.hpp"
#include "isokin/harness.hpp"

#include <Eigen/Core>

#include <functional>
#include <random>
#include <vector>

namespace oracle
{

/// Central differences, h = 1e-6 scaled by max(1, |x|).
Eigen::Matrix3d fd_gradient(const std::function<Eigen::Vector3d(const Eigen::Vector3d &)> &f, const Eigen::Vector3d &x,
                            double h = 1e-6);

/// Enclosed volume of the cavity bounded by the deformed inner wall r = r_in
/// and the end discs, via signed tetrahedra against the origin, minus the same
/// discretisation undeformed.
double cavity_volume_change(const isokin::CompositeDeformation &comp, double r_in, double h, int ntheta = 512,
                            int nz = 400);

/// sqrt(sum |a-f|^2 / sum |a-o|^2) by direct loops over matching ids.
double brute_force_metric(const isokin::NodeSet &o, const isokin::NodeSet &a, const isokin::NodeSet &f);

/// Nested-loop J W^-1 J^T solve via full pivoting LU: an independent route to
/// the weighted pseudoinverse.
Eigen::MatrixXd weighted_pinv_lu(const Eigen::MatrixXd &J, const Eigen::MatrixXd &W);

Eigen::MatrixXd random_spd(int n, std::mt19937_64 &rng, double floor = 0.5);

} // namespace oracle
