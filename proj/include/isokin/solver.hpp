// solver.hpp
//
// Inverse kinematics over modal weights: Jacobian pseudoinverse iteration,
// null-space projected gradient, and SE(3) trajectory tracking.

#pragma once

#include "isokin/backbone.hpp"
#include "isokin/error.hpp"
#include "isokin/liegroup.hpp"

#include <Eigen/Core>

#include <functional>
#include <memory>
#include <optional>
#include <vector>

namespace isokin
{

struct IKOptions
{
  int max_iters = 100;
  double tol = 1e-8;
  double fd_step = 1e-6;       // relative: h_j = fd_step * max(1, |p_j|)
  double step_fraction = 0.1;  // fraction of the remaining gap requested per iteration
  double alpha = 0.1;          // projected-gradient gain, 0 < alpha < 1
  double damping = 1e-8;
  /// Damp once the smallest eigenvalue of J W^-1 J^T drops to this fraction of
  /// the largest; 1 or more damps every step.
  double damping_threshold = 1e-12;
  std::optional<Eigen::MatrixXd> weight; // identity when unset
  int trajectory_steps = 100;
  std::optional<double> dt;              // 1 / trajectory_steps when unset

  /// Throws InvalidArgument on out-of-range settings or a weight of the wrong size.
  void validate(std::size_t parameterCount) const;
  double time_step() const { return dt ? *dt : 1.0 / trajectory_steps; }
};

struct TraceRecord
{
  int iteration = 0;
  double residual = 0.0;
  double param_norm = 0.0;
  bool damped = false;
};

struct IKResult
{
  Eigen::VectorXd p;
  std::vector<TraceRecord> trace;
  double residual = 0.0;
  int iterations = 0;
};

/// NoConvergence with the last iterate and full trace attached.
class NoConvergenceError : public Error
{
public:
  NoConvergenceError(IKResult partial);
  const IKResult &partial() const { return _partial; }

private:
  IKResult _partial;
};

using VectorState = std::function<Eigen::VectorXd(const Eigen::VectorXd &)>;
using PoseState = std::function<RigidPose(const Eigen::VectorXd &)>;

struct VectorProblem
{
  VectorState state;
  Eigen::VectorXd target;
  Eigen::VectorXd initial; // undeformed weights
  IKOptions options;
};

struct PoseProblem
{
  PoseState state;
  RigidPose target;
  Eigen::VectorXd initial;
  IKOptions options;
};

/// Centered differences with h_j = fdStep * max(1, |p_j|). If a probe hits a
/// singular configuration the step is shrunk tenfold once; a second failure
/// throws StateUndefined.
Eigen::MatrixXd numerical_jacobian(const VectorState &state, const Eigen::VectorXd &p, double fdStep);

/// 6 x m Jacobian of the body twist log(g(p)^-1 g(p + dp)).
Eigen::MatrixXd pose_jacobian(const PoseState &state, const Eigen::VectorXd &p, double fdStep);

/// W^-1 J^T (J W^-1 J^T)^-1. Adds `damping` I to J W^-1 J^T when its eigenvalue
/// ratio is at or below `threshold` and reports that through `damped`. Throws
/// CheckFailed for a non-SPD W and RankDeficient when the result is not finite.
Eigen::MatrixXd pinv_weighted(const Eigen::MatrixXd &J, const Eigen::MatrixXd &W, double damping = 1e-8,
                              bool *damped = nullptr, double threshold = 1e-12);

IKResult ik_jacobian(const VectorProblem &problem);
/// Adds -alpha Z grad(p^T p) with Z = I - J+ J; stops once both the residual and
/// the null-space step are below tol.
IKResult ik_projected_gradient(const VectorProblem &problem);
/// Tracks g0 exp(t log(g0^-1 g_target)) for t in [0, 1] with a velocity
/// feed-forward and a log-map correction each step.
IKResult ik_se3_track(const PoseProblem &problem);

struct RodSolution
{
  IKResult result;
  std::shared_ptr<const BackboneCurve> curve;
};

/// Conformational backbone for shooting weights p = (omega(0), lambda).
std::shared_ptr<const BackboneCurve> rod_curve(const Eigen::VectorXd &p, double length, int steps = 1000);

/// Shooting over p = (omega(0), lambda) of the conformational rod so that its
/// end pose matches `desired`, starting from the straight rod unless `initial`
/// is given. Throws Unreachable when ||t_d|| > L - tol, unless the start already
/// meets the target.
RodSolution rod_shooting(const RigidPose &desired, double length, IKOptions options = {}, int steps = 1000,
                         std::optional<Eigen::VectorXd> initial = std::nullopt);

} // namespace isokin
