// mechanics.hpp
//
// Mooney-Rivlin strain energy of a composite deformation and the energy-fitted
// weight matrix used by the weighted pseudoinverse.

#pragma once

#include "isokin/compose.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

namespace isokin
{

/// Mooney-Rivlin coefficients, kPa.
struct Material
{
  double c10 = 0.0;
  double c01 = 0.0;
};

/// "ecoflex-00-10", "ecoflex-00-30", "ecoflex-00-50", "dragonskin-30".
std::optional<Material> material_by_name(std::string_view name);

struct Invariants
{
  double i1, i2, i3;
};

/// Throws NotSymmetric when B is not symmetric to 1e-8.
Invariants invariants(const Eigen::Matrix3d &B);

/// C10 (I1 - 3) + C01 (I2 - 3) with B = F F^T. Throws NotIsochoric when
/// |det F - 1| > 1e-6.
double mr_density(const Eigen::Matrix3d &F, const Material &mat);

/// [-wx/2, wx/2] x [-wy/2, wy/2] x [0, h].
struct BlockDomain
{
  double wx = 3.0, wy = 3.0, h = 6.0;
  int nx = 20, ny = 20, nz = 20;
};

/// Annulus r_in <= r <= r_out extruded over [0, h].
struct CylShellDomain
{
  double r_in = 1.6, r_out = 1.8, h = 10.0;
  int nr = 8, ntheta = 32, nh = 40;
};

/// Eight rings: bending energy grows like r^3 across the section, and the
/// radial midpoint error 1/(2 nr^2) needs nr >= 8 to be converged to 1%.
struct SolidCylDomain
{
  double r = 0.45, h = 15.0;
  int nr = 8, ntheta = 16, nh = 60;
};

using QuadratureDomain = std::variant<BlockDomain, CylShellDomain, SolidCylDomain>;

struct QuadraturePoint
{
  Eigen::Vector3d x;
  double volume;
};

/// Midpoint rule; cylindrical cells carry r dr dtheta dh. Throws InvalidArgument
/// for non-positive dimensions or fewer than 2 points per axis.
std::vector<QuadraturePoint> quadrature_points(const QuadratureDomain &domain);
/// Same domain with every point count multiplied by `factor`.
QuadratureDomain refined(const QuadratureDomain &domain, int factor);

/// Order-fixed pairwise summation.
double pairwise_sum(const std::vector<double> &values);

/// Sum of V_i psi_i over the domain, kPa cm^3. SingularInput names the point.
double total_energy(const CompositeDeformation &comp, const Eigen::VectorXd &p, const QuadratureDomain &domain,
                    const Material &mat);

struct WeightFit
{
  Eigen::MatrixXd W;
  int sample_count = 0;
  double magnitude = 0.0;
  double residual = 0.0; // ||A w - c|| / ||c||
  bool positive_definite = false;
};

/// The m(m+1)/2 symmetric basis matrices: diagonal units first, then the
/// off-diagonal pairs (j, l), j < l, row-major.
std::vector<Eigen::MatrixXd> symmetric_basis(int m);

/// Least-squares fit of c_i = p_i^T W p_i over seeded samples drawn uniformly
/// from [-magnitude, magnitude]^m in antithetic pairs (p, -p). Throws
/// InvalidArgument when sampleCount < m(m+1)/2 and IllConditioned when the
/// system's rank is short.
WeightFit fit_weight_matrix(const std::function<double(const Eigen::VectorXd &)> &energy, int m, int sampleCount,
                            double magnitude, std::uint64_t seed);

WeightFit fit_weight_matrix(const CompositeDeformation &comp, const QuadratureDomain &domain, const Material &mat,
                            int sampleCount, double magnitude, std::uint64_t seed);

} // namespace isokin
