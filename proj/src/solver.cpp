// solver.cpp

#include "isokin/solver.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace isokin
{

void IKOptions::validate(std::size_t parameterCount) const
{
  if(max_iters < 0)
    throw Error(ErrorCode::InvalidArgument, "max_iters must be non-negative");
  if(!(tol > 0.0))
    throw Error(ErrorCode::InvalidArgument, "tol must be positive");
  if(!(fd_step > 0.0))
    throw Error(ErrorCode::InvalidArgument, "fd_step must be positive");
  if(!(step_fraction > 0.0 && step_fraction <= 1.0))
    throw Error(ErrorCode::InvalidArgument, "step_fraction must lie in (0, 1]");
  if(!(alpha > 0.0 && alpha < 1.0))
    throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0, 1)");
  if(!(damping >= 0.0))
    throw Error(ErrorCode::InvalidArgument, "damping must be non-negative");
  if(!(damping_threshold >= 0.0))
    throw Error(ErrorCode::InvalidArgument, "damping_threshold must be non-negative");
  if(trajectory_steps < 1)
    throw Error(ErrorCode::InvalidArgument, "trajectory_steps must be positive");
  if(dt && !(*dt > 0.0 && *dt <= 1.0))
    throw Error(ErrorCode::InvalidArgument, "dt must lie in (0, 1]");
  if(weight && (static_cast<std::size_t>(weight->rows()) != parameterCount ||
                static_cast<std::size_t>(weight->cols()) != parameterCount))
    throw Error(ErrorCode::InvalidArgument, "weight matrix must be " + std::to_string(parameterCount) + " x " +
                                                std::to_string(parameterCount));
}

NoConvergenceError::NoConvergenceError(IKResult partial)
    : Error(ErrorCode::NoConvergence, "no convergence after " + std::to_string(partial.iterations) +
                                          " iterations, residual " + std::to_string(partial.residual)),
      _partial(std::move(partial))
{
}

namespace
{

bool is_singular(const Error &e)
{
  return e.code() == ErrorCode::SingularInput || e.code() == ErrorCode::NonRigidTopPlane ||
         e.code() == ErrorCode::NegativeCavity || e.code() == ErrorCode::AngleNearPi;
}

Eigen::MatrixXd jacobian_once(const VectorState &state, const Eigen::VectorXd &p, double fdStep)
{
  Eigen::MatrixXd J;
  for(Eigen::Index j = 0; j < p.size(); ++j)
  {
    const double h = fdStep * std::max(1.0, std::abs(p[j]));
    Eigen::VectorXd plus = p, minus = p;
    plus[j] += h;
    minus[j] -= h;
    const Eigen::VectorXd dp = state(plus);
    const Eigen::VectorXd dm = state(minus);
    if(J.size() == 0)
      J.resize(dp.size(), p.size());
    J.col(j) = (dp - dm) / (2.0 * h);
  }
  return J;
}

Eigen::MatrixXd weight_or_identity(const IKOptions &opt, Eigen::Index m)
{
  return opt.weight ? *opt.weight : Eigen::MatrixXd::Identity(m, m);
}

TraceRecord record(int it, double residual, const Eigen::VectorXd &p, bool damped)
{
  return {it, residual, p.norm(), damped};
}

IKResult vector_solve(const VectorProblem &problem, bool projected)
{
  const IKOptions &opt = problem.options;
  opt.validate(static_cast<std::size_t>(problem.initial.size()));
  const Eigen::MatrixXd W = weight_or_identity(opt, problem.initial.size());

  IKResult res;
  res.p = problem.initial;
  Eigen::VectorXd d = problem.state(res.p);
  if(d.size() != problem.target.size())
    throw Error(ErrorCode::InvalidArgument, "target has " + std::to_string(problem.target.size()) +
                                                " components but the state has " + std::to_string(d.size()));
  res.residual = (problem.target - d).norm();
  res.trace.push_back(record(0, res.residual, res.p, false));

  double nullStep = 0.0;
  while(res.residual >= opt.tol || (projected && nullStep >= opt.tol))
  {
    if(res.iterations >= opt.max_iters)
      throw NoConvergenceError(res);
    const Eigen::MatrixXd J = numerical_jacobian(problem.state, res.p, opt.fd_step);
    bool damped = false;
    const Eigen::MatrixXd Jp = pinv_weighted(J, W, opt.damping, &damped, opt.damping_threshold);
    Eigen::VectorXd step = Jp * (opt.step_fraction * (problem.target - d));
    if(projected)
    {
      const Eigen::MatrixXd Z = Eigen::MatrixXd::Identity(res.p.size(), res.p.size()) - Jp * J;
      const Eigen::VectorXd descent = -opt.alpha * (Z * (2.0 * res.p));
      nullStep = descent.norm();
      step += descent;
    }
    res.p += step;
    d = problem.state(res.p);
    res.residual = (problem.target - d).norm();
    ++res.iterations;
    res.trace.push_back(record(res.iterations, res.residual, res.p, damped));
  }
  return res;
}

} // namespace

Eigen::MatrixXd numerical_jacobian(const VectorState &state, const Eigen::VectorXd &p, double fdStep)
{
  try
  {
    return jacobian_once(state, p, fdStep);
  }
  catch(const Error &e)
  {
    if(!is_singular(e))
      throw;
  }
  try
  {
    return jacobian_once(state, p, fdStep / 10.0);
  }
  catch(const Error &e)
  {
    if(!is_singular(e))
      throw;
    throw Error(ErrorCode::StateUndefined, std::string("finite-difference probe left the valid region: ") + e.what());
  }
}

Eigen::MatrixXd pose_jacobian(const PoseState &state, const Eigen::VectorXd &p, double fdStep)
{
  const RigidPose inv = state(p).inverse();
  return numerical_jacobian([&](const Eigen::VectorXd &q) -> Eigen::VectorXd { return log_se3(inv * state(q)); }, p,
                            fdStep);
}

Eigen::MatrixXd pinv_weighted(const Eigen::MatrixXd &J, const Eigen::MatrixXd &W, double damping, bool *damped,
                              double threshold)
{
  if(W.rows() != J.cols() || W.cols() != J.cols())
    throw Error(ErrorCode::InvalidArgument, "weight matrix size does not match the Jacobian");
  if(!W.isApprox(W.transpose(), 1e-12))
    throw Error(ErrorCode::CheckFailed, "weight matrix is not symmetric");
  const Eigen::LLT<Eigen::MatrixXd> llt(W);
  if(llt.info() != Eigen::Success)
    throw Error(ErrorCode::CheckFailed, "weight matrix is not positive definite");

  const Eigen::MatrixXd WiJt = llt.solve(J.transpose());
  Eigen::MatrixXd A = J * WiJt;
  A = 0.5 * (A + A.transpose());
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(A, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  const bool damp = !(lo > threshold * hi) || hi <= 0.0;
  if(damp)
    A.diagonal().array() += damping;
  if(damped)
    *damped = damp;

  const Eigen::MatrixXd out = A.ldlt().solve(WiJt.transpose()).transpose();
  if(!out.allFinite())
    throw Error(ErrorCode::RankDeficient, "pseudoinverse is not finite even with damping");
  return out;
}

IKResult ik_jacobian(const VectorProblem &problem) { return vector_solve(problem, false); }

IKResult ik_projected_gradient(const VectorProblem &problem) { return vector_solve(problem, true); }

IKResult ik_se3_track(const PoseProblem &problem)
{
  const IKOptions &opt = problem.options;
  opt.validate(static_cast<std::size_t>(problem.initial.size()));
  const Eigen::MatrixXd W = weight_or_identity(opt, problem.initial.size());
  const double dt = opt.time_step();

  IKResult res;
  res.p = problem.initial;
  RigidPose g = problem.state(res.p);
  const RigidPose g0 = g;
  const Twist6 xi = log_se3(g0.inverse() * problem.target);
  res.residual = log_se3(g.inverse() * problem.target).norm();
  res.trace.push_back(record(0, res.residual, res.p, false));

  double t = 0.0;
  while(t < 1.0 || res.residual >= opt.tol)
  {
    if(res.residual < opt.tol && t == 0.0)
      break; // already at the target
    if(res.iterations >= opt.max_iters)
      throw NoConvergenceError(res);
    const double next = std::min(t + dt, 1.0);
    const RigidPose gp = g0 * exp_se3(t * xi);
    const Matrix6d Ad = adjoint(g.inverse() * gp);

    const Eigen::MatrixXd J = pose_jacobian(problem.state, res.p, opt.fd_step);
    bool damped = false;
    const Eigen::MatrixXd Jp = pinv_weighted(J, W, opt.damping, &damped, opt.damping_threshold);
    // feed-forward along the trajectory plus the correction back onto it
    const Twist6 velocity = Ad * xi * (next - t);
    const Twist6 correction = log_se3(g.inverse() * gp);
    res.p += Jp * (velocity + correction);
    t = next;

    g = problem.state(res.p);
    res.residual = log_se3(g.inverse() * problem.target).norm();
    ++res.iterations;
    res.trace.push_back(record(res.iterations, res.residual, res.p, damped));
  }
  return res;
}

} // namespace isokin
