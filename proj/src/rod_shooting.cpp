// rod_shooting.cpp

#include "isokin/solver.hpp"

namespace isokin
{

std::shared_ptr<const BackboneCurve> rod_curve(const Eigen::VectorXd &p, double length, int steps)
{
  if(p.size() != 6)
    throw Error(ErrorCode::InvalidArgument, "rod shooting takes 6 parameters (omega0, lambda)");
  return std::make_shared<const BackboneCurve>(ConformationalOmega{p.head<3>(), p.tail<3>()}, length, steps);
}

RodSolution rod_shooting(const RigidPose &desired, double length, IKOptions options, int steps,
                         std::optional<Eigen::VectorXd> initial)
{
  PoseProblem problem;
  problem.state = [=](const Eigen::VectorXd &p) { return rod_curve(p, length, steps)->end_pose(); };
  problem.target = desired;
  problem.initial = initial ? *initial : Eigen::VectorXd::Zero(6);
  if(problem.initial.size() != 6)
    throw Error(ErrorCode::InvalidArgument, "rod shooting takes 6 parameters (omega0, lambda)");
  problem.options = std::move(options);

  // a target the start already meets (e.g. the straight rod) is trivially reachable
  const bool atStart =
      log_se3(problem.state(problem.initial).inverse() * desired).norm() < problem.options.tol;
  if(!atStart && desired.translation.norm() > length - problem.options.tol)
    throw Error(ErrorCode::Unreachable, "target lies " + std::to_string(desired.translation.norm()) +
                                            " cm from the base, beyond the rod length " + std::to_string(length));

  RodSolution out;
  out.result = ik_se3_track(problem);
  out.curve = rod_curve(out.result.p, length, steps);
  return out;
}

} // namespace isokin
