// mechanics.cpp

#include "isokin/mechanics.hpp"
#include "isokin/error.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace isokin
{

std::optional<Material> material_by_name(std::string_view name)
{
  if(name == "ecoflex-00-10")
    return Material{0.624, 0.746};
  if(name == "ecoflex-00-30")
    return Material{5.6, 6.3};
  if(name == "ecoflex-00-50")
    return Material{10.4, 21.4};
  if(name == "dragonskin-30")
    return Material{1.19, 23.028};
  return std::nullopt;
}

Invariants invariants(const Eigen::Matrix3d &B)
{
  if(!((B - B.transpose()).cwiseAbs().maxCoeff() <= 1e-8 * std::max(1.0, B.cwiseAbs().maxCoeff())))
    throw Error(ErrorCode::NotSymmetric, "left Cauchy-Green tensor is not symmetric");
  const double tr = B.trace();
  return {tr, 0.5 * (tr * tr - (B * B).trace()), B.determinant()};
}

double mr_density(const Eigen::Matrix3d &F, const Material &mat)
{
  const double J = F.determinant();
  if(!(std::abs(J - 1.0) <= 1e-6))
    throw Error(ErrorCode::NotIsochoric, "det F = " + std::to_string(J));
  // B = I + E; I1 - 3 and I2 - 3 expanded in E so small strains do not cancel against 3
  const Eigen::Matrix3d H = F - Eigen::Matrix3d::Identity();
  const Eigen::Matrix3d E = H + H.transpose() + H * H.transpose();
  const double trE = E.trace();
  const double i1m3 = trE;
  const double i2m3 = 2.0 * trE + 0.5 * (trE * trE - (E * E).trace());
  return mat.c10 * i1m3 + mat.c01 * i2m3;
}

namespace
{

void check_axis(double length, int n, const char *what)
{
  if(!(length > 0.0))
    throw Error(ErrorCode::InvalidArgument, std::string(what) + " must be positive");
  if(n < 2)
    throw Error(ErrorCode::InvalidArgument, std::string(what) + " needs at least 2 quadrature points");
}

std::vector<QuadraturePoint> cylinder(double rIn, double rOut, double h, int nr, int nt, int nh)
{
  std::vector<QuadraturePoint> pts;
  pts.reserve(static_cast<std::size_t>(nr) * nt * nh);
  const double dr = (rOut - rIn) / nr, dt = 2.0 * std::numbers::pi / nt, dh = h / nh;
  for(int k = 0; k < nh; ++k)
    for(int j = 0; j < nt; ++j)
      for(int i = 0; i < nr; ++i)
      {
        const double r = rIn + (i + 0.5) * dr, th = (j + 0.5) * dt;
        pts.push_back({{r * std::cos(th), r * std::sin(th), (k + 0.5) * dh}, r * dr * dt * dh});
      }
  return pts;
}

double pairwise(const double *v, std::size_t n)
{
  if(n <= 8)
  {
    double s = 0.0;
    for(std::size_t i = 0; i < n; ++i)
      s += v[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise(v, half) + pairwise(v + half, n - half);
}

} // namespace

std::vector<QuadraturePoint> quadrature_points(const QuadratureDomain &domain)
{
  if(const auto *b = std::get_if<BlockDomain>(&domain))
  {
    check_axis(b->wx, b->nx, "block width x");
    check_axis(b->wy, b->ny, "block width y");
    check_axis(b->h, b->nz, "block height");
    std::vector<QuadraturePoint> pts;
    pts.reserve(static_cast<std::size_t>(b->nx) * b->ny * b->nz);
    const double dx = b->wx / b->nx, dy = b->wy / b->ny, dz = b->h / b->nz;
    for(int k = 0; k < b->nz; ++k)
      for(int j = 0; j < b->ny; ++j)
        for(int i = 0; i < b->nx; ++i)
          pts.push_back({{-0.5 * b->wx + (i + 0.5) * dx, -0.5 * b->wy + (j + 0.5) * dy, (k + 0.5) * dz},
                         dx * dy * dz});
    return pts;
  }
  if(const auto *c = std::get_if<CylShellDomain>(&domain))
  {
    check_axis(c->r_out - c->r_in, c->nr, "shell thickness");
    check_axis(c->r_in, c->ntheta, "inner radius");
    check_axis(c->h, c->nh, "shell height");
    return cylinder(c->r_in, c->r_out, c->h, c->nr, c->ntheta, c->nh);
  }
  const auto &s = std::get<SolidCylDomain>(domain);
  check_axis(s.r, s.nr, "rod radius");
  check_axis(2.0 * std::numbers::pi, s.ntheta, "rod angle");
  check_axis(s.h, s.nh, "rod height");
  return cylinder(0.0, s.r, s.h, s.nr, s.ntheta, s.nh);
}

QuadratureDomain refined(const QuadratureDomain &domain, int factor)
{
  return std::visit(
      [factor](auto d) -> QuadratureDomain {
        using T = decltype(d);
        if constexpr(std::is_same_v<T, BlockDomain>)
        {
          d.nx *= factor;
          d.ny *= factor;
          d.nz *= factor;
        }
        else
        {
          d.nr *= factor;
          d.ntheta *= factor;
          d.nh *= factor;
        }
        return d;
      },
      domain);
}

double pairwise_sum(const std::vector<double> &values) { return pairwise(values.data(), values.size()); }

double total_energy(const CompositeDeformation &comp, const Eigen::VectorXd &p, const QuadratureDomain &domain,
                    const Material &mat)
{
  const CompositeDeformation c = comp.with_parameters(p);
  const auto pts = quadrature_points(domain);
  std::vector<double> terms(pts.size());
  Eigen::Vector3d y;
  Eigen::Matrix3d F;
  for(std::size_t i = 0; i < pts.size(); ++i)
  {
    try
    {
      c.apply_with_gradient(pts[i].x, y, F);
    }
    catch(const Error &e)
    {
      if(e.code() != ErrorCode::SingularInput)
        throw;
      std::ostringstream os;
      os << "quadrature point (" << pts[i].x.x() << ", " << pts[i].x.y() << ", " << pts[i].x.z()
         << ") is singular: " << e.what();
      throw Error(ErrorCode::SingularInput, os.str(), i);
    }
    terms[i] = pts[i].volume * mr_density(F, mat);
  }
  return pairwise_sum(terms);
}

std::vector<Eigen::MatrixXd> symmetric_basis(int m)
{
  std::vector<Eigen::MatrixXd> out;
  out.reserve(static_cast<std::size_t>(m * (m + 1) / 2));
  for(int j = 0; j < m; ++j)
  {
    out.push_back(Eigen::MatrixXd::Zero(m, m));
    out.back()(j, j) = 1.0;
  }
  for(int j = 0; j < m; ++j)
    for(int l = j + 1; l < m; ++l)
    {
      out.push_back(Eigen::MatrixXd::Zero(m, m));
      out.back()(j, l) = out.back()(l, j) = 1.0;
    }
  return out;
}

WeightFit fit_weight_matrix(const std::function<double(const Eigen::VectorXd &)> &energy, int m, int sampleCount,
                            double magnitude, std::uint64_t seed)
{
  const int K = m * (m + 1) / 2;
  if(m < 1)
    throw Error(ErrorCode::InvalidArgument, "weight fit needs at least one parameter");
  if(sampleCount < K)
    throw Error(ErrorCode::InvalidArgument, "sample count " + std::to_string(sampleCount) + " is below m(m+1)/2 = " +
                                                std::to_string(K));
  if(!(magnitude > 0.0))
    throw Error(ErrorCode::InvalidArgument, "sample magnitude must be positive");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-magnitude, magnitude);
  Eigen::MatrixXd A(sampleCount, K);
  Eigen::VectorXd c(sampleCount);
  Eigen::VectorXd p(m);
  for(int i = 0; i < sampleCount; ++i)
  {
    // antithetic pairs: odd-order terms of the energy cancel in the fit
    if(i % 2 == 0)
      for(int j = 0; j < m; ++j)
        p[j] = dist(rng);
    else
      p = -p;
    int k = 0;
    for(int j = 0; j < m; ++j)
      A(i, k++) = p[j] * p[j];
    for(int j = 0; j < m; ++j)
      for(int l = j + 1; l < m; ++l)
        A(i, k++) = 2.0 * p[j] * p[l];
    c[i] = energy(p);
  }

  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  if(qr.rank() < K)
    throw Error(ErrorCode::IllConditioned, "weight fit has rank " + std::to_string(qr.rank()) + " < " +
                                               std::to_string(K) + "; draw more samples");
  const Eigen::VectorXd w = qr.solve(c);

  WeightFit fit;
  fit.W.resize(m, m);
  int k = 0;
  for(int j = 0; j < m; ++j)
    fit.W(j, j) = w[k++];
  for(int j = 0; j < m; ++j)
    for(int l = j + 1; l < m; ++l)
      fit.W(j, l) = fit.W(l, j) = w[k++];
  fit.sample_count = sampleCount;
  fit.magnitude = magnitude;
  const double cn = c.norm();
  fit.residual = cn > 0.0 ? (A * w - c).norm() / cn : (A * w - c).norm();
  fit.positive_definite = Eigen::LLT<Eigen::MatrixXd>(fit.W).info() == Eigen::Success;
  return fit;
}

WeightFit fit_weight_matrix(const CompositeDeformation &comp, const QuadratureDomain &domain, const Material &mat,
                            int sampleCount, double magnitude, std::uint64_t seed)
{
  const Eigen::VectorXd base = comp.parameters();
  return fit_weight_matrix(
      [&](const Eigen::VectorXd &p) { return total_energy(comp, base + p, domain, mat); },
      static_cast<int>(comp.parameter_count()), sampleCount, magnitude, seed);
}

} // namespace isokin
