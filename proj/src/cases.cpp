// cases.cpp

#include "isokin/cases.hpp"
#include "isokin/error.hpp"

#include <cmath>
#include <numbers>

namespace isokin
{

CaseKind parse_case(std::string_view tag)
{
  if(tag == "chamber")
    return CaseKind::Chamber;
  if(tag == "rod2d")
    return CaseKind::Rod2d;
  if(tag == "rod3d")
    return CaseKind::Rod3d;
  if(tag == "block")
    return CaseKind::Block;
  throw Error(ErrorCode::UnknownCase, "unknown case '" + std::string(tag) + "'");
}

std::string_view to_string(CaseKind kind)
{
  switch(kind)
  {
  case CaseKind::Chamber: return "chamber";
  case CaseKind::Rod2d: return "rod2d";
  case CaseKind::Rod3d: return "rod3d";
  case CaseKind::Block: return "block";
  }
  return "?";
}

SolverKind parse_solver(std::string_view tag)
{
  if(tag == "jacobian")
    return SolverKind::Jacobian;
  if(tag == "projgrad")
    return SolverKind::ProjGrad;
  if(tag == "se3")
    return SolverKind::Se3;
  throw Error(ErrorCode::InvalidArgument, "unknown solver '" + std::string(tag) + "'");
}

std::string_view to_string(SolverKind kind)
{
  switch(kind)
  {
  case SolverKind::Jacobian: return "jacobian";
  case SolverKind::ProjGrad: return "projgrad";
  case SolverKind::Se3: return "se3";
  }
  return "?";
}

CaseConfig default_case(CaseKind kind)
{
  CaseConfig cfg;
  cfg.kind = kind;
  cfg.solver.max_iters = 500;
  switch(kind)
  {
  case CaseKind::Chamber:
    cfg.geometry.height = 10.0;
    cfg.modes.stages = {"source"};
    cfg.targets.volume = 105.0;
    break;
  case CaseKind::Rod2d:
    cfg.geometry.height = 15.0;
    cfg.modes.stages = {"bend"};
    cfg.targets.displacement = {0.0, 4.0, -2.0};
    cfg.targets.rotation = {-0.6, 0.0, 0.0};
    break;
  case CaseKind::Rod3d:
    cfg.geometry.height = 15.0;
    cfg.material_name = "dragonskin-30";
    cfg.material = *material_by_name(cfg.material_name);
    cfg.solver_kind = SolverKind::Se3;
    // the straight rod cannot shorten to first order; always-on damping keeps
    // the shooting on the low-curvature branch
    cfg.solver.damping = 1.0;
    cfg.solver.damping_threshold = 1.0;
    cfg.targets.displacement = {1.5, 1.5, -3.0};
    cfg.targets.rotation = {0.1, 0.1, 0.1};
    break;
  case CaseKind::Block:
    cfg.geometry.height = 6.0;
    cfg.modes.stages = {"twist", "stretch", "shear", "bend"};
    cfg.targets.displacement = {0.6, 0.6, 0.6};
    cfg.targets.rotation = {0.1, 0.1, 0.1};
    break;
  }
  return cfg;
}

void CaseConfig::validate() const
{
  const auto positive = [](double v, const char *what) {
    if(!(v > 0.0))
      throw Error(ErrorCode::InvalidArgument, std::string("geometry.") + what + " must be positive");
  };
  positive(geometry.height, "height");
  switch(kind)
  {
  case CaseKind::Chamber:
    positive(geometry.r_in, "r_in");
    positive(geometry.wall, "wall");
    break;
  case CaseKind::Rod2d:
  case CaseKind::Rod3d: positive(geometry.radius, "radius"); break;
  case CaseKind::Block:
    positive(geometry.wx, "wx");
    positive(geometry.wy, "wy");
    break;
  }
  if(kind != CaseKind::Rod3d && modes.stages.empty())
    throw Error(ErrorCode::InvalidArgument, "modes.stages must list at least one stage");
  for(const auto &s : modes.stages)
    if(s != "twist" && s != "stretch" && s != "shear" && s != "bend" && s != "source")
      throw Error(ErrorCode::InvalidArgument, "unknown stage '" + s + "'");
  if(modes.count < 0)
    throw Error(ErrorCode::InvalidArgument, "modes.count must be non-negative");
  if(modes.backbone_steps < 2)
    throw Error(ErrorCode::InvalidArgument, "modes.backbone_steps must be at least 2");
  if(kind == CaseKind::Rod3d && solver_kind != SolverKind::Se3)
    throw Error(ErrorCode::InvalidArgument, "rod3d is solved by shooting and needs solver se3");
  if(kind == CaseKind::Chamber && solver_kind == SolverKind::Se3)
    throw Error(ErrorCode::InvalidArgument, "the chamber state is a volume; se3 tracking does not apply");
  if(energy.grid)
    for(int n : *energy.grid)
      if(n < 2)
        throw Error(ErrorCode::InvalidArgument, "energy grid needs at least 2 points per axis");
  if(!(energy.magnitude > 0.0))
    throw Error(ErrorCode::InvalidArgument, "energy.magnitude must be positive");
}

CompositeDeformation build_composite(const CaseConfig &cfg)
{
  if(cfg.kind == CaseKind::Rod3d)
    throw Error(ErrorCode::InvalidArgument, "the rod3d composite is built from a solved backbone");
  const double h = cfg.geometry.height;
  std::vector<DeformationPrimitive> stages;
  for(const auto &s : cfg.modes.stages)
  {
    if(s == "twist")
      stages.emplace_back(Twist{make_basis(BasisCase::BlockTwist, h)});
    else if(s == "stretch")
      stages.emplace_back(Elongation{make_basis(BasisCase::BlockStretchRate, h)});
    else if(s == "shear")
      stages.emplace_back(Shear{make_basis(BasisCase::BlockShear, h), make_basis(BasisCase::BlockShear, h)});
    else if(s == "bend")
    {
      const BasisCase which = cfg.kind == CaseKind::Block ? BasisCase::BlockBend : BasisCase::Rod2d;
      stages.emplace_back(Bend2D(make_basis(which, h, cfg.modes.count), h));
    }
    else if(s == "source")
      stages.emplace_back(Source{make_basis(BasisCase::Chamber, h, cfg.modes.count)});
    else
      throw Error(ErrorCode::InvalidArgument, "unknown stage '" + s + "'");
  }
  CompositeOptions opt;
  opt.reference_height = h;
  opt.counter_rotate_base = cfg.modes.counter_rotate_base;
  return CompositeDeformation(std::move(stages), opt);
}

CompositeDeformation rod3d_composite(std::shared_ptr<const BackboneCurve> curve)
{
  std::vector<DeformationPrimitive> stages;
  stages.emplace_back(Twist{CurveTwist{curve, CurveTwistKind::Material}});
  stages.emplace_back(Bend3D{std::move(curve)});
  return CompositeDeformation(std::move(stages));
}

QuadratureDomain case_domain(const CaseConfig &cfg)
{
  const auto &g = cfg.geometry;
  QuadratureDomain d;
  switch(cfg.kind)
  {
  case CaseKind::Chamber: d = CylShellDomain{g.r_in, g.r_in + g.wall, g.height}; break;
  case CaseKind::Rod2d:
  case CaseKind::Rod3d: d = SolidCylDomain{g.radius, g.height}; break;
  case CaseKind::Block: d = BlockDomain{g.wx, g.wy, g.height}; break;
  }
  if(cfg.energy.grid)
  {
    const auto &n = *cfg.energy.grid;
    std::visit(
        [&](auto &dom) {
          using T = std::decay_t<decltype(dom)>;
          if constexpr(std::is_same_v<T, BlockDomain>)
          {
            dom.nx = n[0];
            dom.ny = n[1];
            dom.nz = n[2];
          }
          else
          {
            dom.nr = n[0];
            dom.ntheta = n[1];
            dom.nh = n[2];
          }
        },
        d);
  }
  return d;
}

SurfaceGrid case_surface(const CaseConfig &cfg, int nu, int nv)
{
  const auto &g = cfg.geometry;
  switch(cfg.kind)
  {
  case CaseKind::Chamber: return cylinder_surface(g.r_in + g.wall, g.height, nu, nv);
  case CaseKind::Rod2d:
  case CaseKind::Rod3d: return cylinder_surface(g.radius, g.height, nu, nv);
  case CaseKind::Block: break;
  }
  return block_surface(g.wx, g.wy, g.height, nu, nv);
}

bool on_case_boundary(const CaseConfig &cfg, const Eigen::Vector3d &x)
{
  const auto &g = cfg.geometry;
  const double tol = 1e-6 * std::max(1.0, g.height);
  const auto near = [tol](double a, double b) { return std::abs(a - b) <= tol; };
  if(near(x.z(), 0.0) || near(x.z(), g.height))
    return true;
  const double r = std::hypot(x.x(), x.y());
  switch(cfg.kind)
  {
  case CaseKind::Chamber: return near(r, g.r_in) || near(r, g.r_in + g.wall);
  case CaseKind::Rod2d:
  case CaseKind::Rod3d: return near(r, g.radius);
  case CaseKind::Block: break;
  }
  return near(std::abs(x.x()), 0.5 * g.wx) || near(std::abs(x.y()), 0.5 * g.wy);
}

double chamber_target_volume(const CaseConfig &cfg)
{
  if(const auto &gas = cfg.targets.gas)
    return gas_corrected_volume(gas->vb, gas->pb, gas->pa, gas->vi);
  return cfg.targets.volume;
}

namespace
{

const ModalFunction &source_strength(const CompositeDeformation &comp)
{
  for(const auto &s : comp.stages())
    if(const auto *src = std::get_if<Source>(&s))
      return src->strength;
  throw Error(ErrorCode::InvalidArgument, "chamber composite has no source stage");
}

} // namespace

VectorState case_vector_state(const CaseConfig &cfg, const CompositeDeformation &base)
{
  const double h = cfg.geometry.height;
  switch(cfg.kind)
  {
  case CaseKind::Chamber:
    return [base, h](const Eigen::VectorXd &p) {
      Eigen::VectorXd d(1);
      // unchecked: central-difference probes around p = 0 dip below zero strength
      d[0] = std::numbers::pi * source_strength(base.with_parameters(p)).integral(h);
      return d;
    };
  case CaseKind::Rod2d:
    return [base, h](const Eigen::VectorXd &p) {
      const RigidPose g = top_plane_pose(base.with_parameters(p), h);
      Eigen::VectorXd d(3);
      d << g.translation.y(), g.translation.z(), log_so3(g.rotation).x();
      return d;
    };
  case CaseKind::Block:
    return [base, h](const Eigen::VectorXd &p) {
      const RigidPose g = top_plane_pose(base.with_parameters(p), h);
      Eigen::VectorXd d(6);
      d << g.translation, log_so3(g.rotation);
      return d;
    };
  case CaseKind::Rod3d: break;
  }
  throw Error(ErrorCode::InvalidArgument, "rod3d has no vector state");
}

Eigen::VectorXd case_vector_target(const CaseConfig &cfg)
{
  const double h = cfg.geometry.height;
  const auto &t = cfg.targets;
  Eigen::VectorXd d;
  switch(cfg.kind)
  {
  case CaseKind::Chamber:
    d.resize(1);
    d[0] = chamber_target_volume(cfg);
    break;
  case CaseKind::Rod2d:
    d.resize(3);
    d << t.displacement.y(), h + t.displacement.z(), t.rotation.x();
    break;
  case CaseKind::Block:
    d.resize(6);
    d << t.displacement + Eigen::Vector3d(0.0, 0.0, h), t.rotation;
    break;
  case CaseKind::Rod3d: throw Error(ErrorCode::InvalidArgument, "rod3d has no vector target");
  }
  return d;
}

PoseState case_pose_state(const CaseConfig &cfg, const CompositeDeformation &base)
{
  if(cfg.kind == CaseKind::Chamber || cfg.kind == CaseKind::Rod3d)
    throw Error(ErrorCode::InvalidArgument, std::string(to_string(cfg.kind)) + " has no top-plane pose state");
  const double h = cfg.geometry.height;
  return [base, h](const Eigen::VectorXd &p) { return top_plane_pose(base.with_parameters(p), h); };
}

RigidPose case_pose_target(const CaseConfig &cfg)
{
  RigidPose g;
  g.rotation = exp_so3(cfg.targets.rotation);
  g.translation = cfg.targets.displacement + Eigen::Vector3d(0.0, 0.0, cfg.geometry.height);
  return g;
}

CaseSolution solve_case(const CaseConfig &cfg, std::optional<Eigen::MatrixXd> weight)
{
  cfg.validate();
  IKOptions opt = cfg.solver;
  if(weight)
    opt.weight = *weight;

  CaseSolution out;
  if(cfg.kind == CaseKind::Rod3d)
  {
    RodSolution rod = rod_shooting(case_pose_target(cfg), cfg.geometry.height, opt, cfg.modes.backbone_steps, cfg.initial);
    out.result = std::move(rod.result);
    out.curve = rod.curve;
    out.deformation = rod3d_composite(rod.curve);
    return out;
  }

  const CompositeDeformation base = build_composite(cfg);
  base.validate_order();
  const Eigen::VectorXd start = cfg.initial ? *cfg.initial : base.parameters();
  if(static_cast<std::size_t>(start.size()) != base.parameter_count())
    throw Error(ErrorCode::InvalidArgument, "initial guess has " + std::to_string(start.size()) +
                                                " entries; the composite has " +
                                                std::to_string(base.parameter_count()) + " parameters");
  if(cfg.solver_kind == SolverKind::Se3)
    out.result = ik_se3_track({case_pose_state(cfg, base), case_pose_target(cfg), start, opt});
  else
  {
    const VectorProblem problem{case_vector_state(cfg, base), case_vector_target(cfg), start, opt};
    out.result = cfg.solver_kind == SolverKind::Jacobian ? ik_jacobian(problem) : ik_projected_gradient(problem);
  }
  out.deformation = base.with_parameters(out.result.p);
  if(cfg.kind == CaseKind::Chamber)
    chamber_volume_change(source_strength(out.deformation), cfg.geometry.height);
  return out;
}

} // namespace isokin
