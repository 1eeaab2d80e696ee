// cli.cpp

#include "isokin/cli.hpp"
#include "isokin/cases.hpp"
#include "isokin/config.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

namespace isokin
{

namespace fs = std::filesystem;
using json = nlohmann::json;

int exit_code(ErrorCode code)
{
  switch(code)
  {
  case ErrorCode::ParseError:
  case ErrorCode::InvalidArgument:
  case ErrorCode::OrderViolation:
  case ErrorCode::UnknownCase:
  case ErrorCode::DuplicateId:
  case ErrorCode::NonFinite:
  case ErrorCode::IdMismatch: return 2;
  default: return 1;
  }
}

namespace
{

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0)
{
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string fmt(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json error_json(const Error &e)
{
  json j = {{"error", std::string(to_string(e.code()))}, {"message", e.what()}, {"exit_code", exit_code(e.code())}};
  if(e.index())
    j["index"] = *e.index();
  return j;
}

int report(const Error &e, std::ostream &err)
{
  err << error_json(e).dump() << "\n";
  return exit_code(e.code());
}

json trace_json(const std::vector<TraceRecord> &trace)
{
  json t = json::array();
  for(const auto &r : trace)
    t.push_back({{"iteration", r.iteration}, {"residual", r.residual}, {"param_norm", r.param_norm}, {"damped", r.damped}});
  return t;
}

std::string trace_csv(const std::vector<TraceRecord> &trace)
{
  std::string s = "iteration,residual,param_norm,damped\n";
  for(const auto &r : trace)
    s += std::to_string(r.iteration) + "," + fmt(r.residual) + "," + fmt(r.param_norm) + "," + (r.damped ? "1" : "0") +
         "\n";
  return s;
}

std::string params_csv(const Eigen::VectorXd &p)
{
  std::string s;
  for(Eigen::Index i = 0; i < p.size(); ++i)
    s += fmt(p[i]) + "\n";
  return s;
}

std::vector<Eigen::Vector3d> quadrature_centres(const QuadratureDomain &domain)
{
  std::vector<Eigen::Vector3d> pts;
  for(const auto &q : quadrature_points(domain))
    pts.push_back(q.x);
  return pts;
}

int basis_size(int m) { return m * (m + 1) / 2; }

/// Free weights of the case and their energy; rod3d has none outside shooting.
WeightFit fit_case(const CaseConfig &cfg)
{
  if(cfg.kind == CaseKind::Rod3d)
    throw Error(ErrorCode::InvalidArgument, "rod3d weights are shooting parameters; fit a modal case instead");
  const CompositeDeformation comp = build_composite(cfg);
  const int m = static_cast<int>(comp.parameter_count());
  const int n = cfg.energy.sample_count > 0 ? cfg.energy.sample_count : 2 * basis_size(m);
  return fit_weight_matrix(comp, case_domain(cfg), cfg.material, n, cfg.energy.magnitude, cfg.energy.seed);
}

struct SolveFlags
{
  std::string config;
  std::string solver;
  std::string out = "isokin_out";
  std::optional<std::uint64_t> seed;
  std::vector<int> surface_grid{24, 24};
  std::string weights = "identity";
};

int cmd_solve(const SolveFlags &flags, std::ostream &out, std::ostream &err)
{
  json manifest = {{"command", "solve"}, {"config_path", flags.config}, {"weights", flags.weights}};
  json timings = json::object();
  json outputs = json::array();
  const fs::path dir(flags.out);
  int code = 0;

  const auto emit = [&](const std::string &name, const std::string &text) {
    write_text(dir / name, text);
    outputs.push_back(name);
  };

  try
  {
    fs::create_directories(dir);
  }
  catch(const fs::filesystem_error &e)
  {
    return report(Error(ErrorCode::IoError, e.what()), err);
  }

  try
  {
    auto t0 = Clock::now();
    CaseConfig cfg = load_config(flags.config);
    if(!flags.solver.empty())
      cfg.solver_kind = parse_solver(flags.solver);
    if(flags.seed)
      cfg.energy.seed = *flags.seed;
    cfg.validate();
    if(flags.surface_grid.size() != 2 || flags.surface_grid[0] < 2 || flags.surface_grid[1] < 2)
      throw Error(ErrorCode::InvalidArgument, "--surface-grid needs two counts of at least 2");
    manifest["config"] = config_snapshot(cfg);
    manifest["seed"] = cfg.energy.seed;
    timings["load"] = ms_since(t0);

    std::optional<Eigen::MatrixXd> W;
    if(flags.weights == "fit")
    {
      t0 = Clock::now();
      const WeightFit fit = fit_case(cfg);
      timings["fit"] = ms_since(t0);
      manifest["weight_fit"] = {{"residual", fit.residual},
                                {"samples", fit.sample_count},
                                {"positive_definite", fit.positive_definite}};
      emit("weights.csv", format_matrix(fit.W));
      W = fit.W;
    }
    else if(flags.weights != "identity")
      W = parse_matrix(read_text(flags.weights));

    t0 = Clock::now();
    CaseSolution sol;
    try
    {
      sol = solve_case(cfg, W);
    }
    catch(const NoConvergenceError &e)
    {
      timings["solve"] = ms_since(t0);
      manifest["trace"] = trace_json(e.partial().trace);
      emit("trace.csv", trace_csv(e.partial().trace));
      emit("params.csv", params_csv(e.partial().p));
      throw;
    }
    const double solveMs = ms_since(t0);
    timings["solve"] = solveMs;
    manifest["trace"] = trace_json(sol.result.trace);
    manifest["result"] = {{"residual", sol.result.residual},
                          {"iterations", sol.result.iterations},
                          {"param_norm", sol.result.p.norm()}};

    t0 = Clock::now();
    emit("params.csv", params_csv(sol.result.p));
    emit("trace.csv", trace_csv(sol.result.trace));
    write_nodes(dir / "points.csv", deform_points(sol.deformation, quadrature_centres(case_domain(cfg))));
    outputs.push_back("points.csv");
    export_points(sol.deformation, case_surface(cfg, flags.surface_grid[0], flags.surface_grid[1]), dir / "surface.obj",
                  PointFormat::Obj);
    outputs.push_back("surface.obj");
    timings["export"] = ms_since(t0);

    out << "residual = " << fmt(sol.result.residual) << "\n";
    out << "iterations = " << sol.result.iterations << "\n";
    out << "solve time = " << solveMs << " ms\n";
    manifest["error"] = nullptr;
  }
  catch(const Error &e)
  {
    manifest["error"] = error_json(e);
    code = report(e, err);
  }

  manifest["timings_ms"] = timings;
  manifest["outputs"] = outputs;
  try
  {
    write_text(dir / "manifest.json", manifest.dump(2) + "\n");
  }
  catch(const Error &e)
  {
    return code ? code : report(e, err);
  }
  return code;
}

struct CompareFlags
{
  std::string ours, theirs, ref;
  bool surface_only = false;
  std::string config;
  std::string report = "compare_report.csv";
};

NodeSet restrict_to(const NodeSet &set, const std::set<long long> &ids)
{
  NodeSet out;
  out.label = set.label;
  for(std::size_t i = 0; i < set.size(); ++i)
    if(ids.count(set.ids[i]))
    {
      out.ids.push_back(set.ids[i]);
      out.points.push_back(set.points[i]);
    }
  return out;
}

int cmd_compare(const CompareFlags &flags, std::ostream &out, std::ostream &err)
{
  try
  {
    NodeSet f = ingest_nodes(flags.ours, true, NodeLabel::Primitive);
    NodeSet a = ingest_nodes(flags.theirs, true, NodeLabel::Fem);
    NodeSet o = ingest_nodes(flags.ref, true, NodeLabel::Fem);
    if(flags.surface_only)
    {
      if(flags.config.empty())
        throw Error(ErrorCode::InvalidArgument, "--surface-only needs --config for the body geometry");
      const CaseConfig cfg = load_config(flags.config);
      std::set<long long> keep;
      for(std::size_t i = 0; i < o.size(); ++i)
        if(on_case_boundary(cfg, o.points[i]))
          keep.insert(o.ids[i]);
      o = restrict_to(o, keep);
      a = restrict_to(a, keep);
      f = restrict_to(f, keep);
    }
    const ErrorReport r = error_metric(o, a, f);

    std::string csv = "id,e,d\n";
    double emax = 0.0, esum = 0.0;
    for(std::size_t i = 0; i < r.ids.size(); ++i)
    {
      csv += std::to_string(r.ids[i]) + "," + fmt(r.e[i]) + "," + fmt(r.d[i]) + "\n";
      emax = std::max(emax, r.e[i]);
      esum += r.e[i];
    }
    write_text(flags.report, csv);

    out << "E = " << fmt(r.E) << "\n";
    out << "nodes = " << r.ids.size() << "\n";
    out << "max e = " << fmt(emax) << "\n";
    out << "mean e = " << fmt(r.ids.empty() ? 0.0 : esum / static_cast<double>(r.ids.size())) << "\n";
    return 0;
  }
  catch(const Error &e)
  {
    return report(e, err);
  }
}

int cmd_fit_weights(const std::string &config, const std::string &outPath, std::optional<std::uint64_t> seed,
                    std::ostream &out, std::ostream &err)
{
  try
  {
    CaseConfig cfg = load_config(config);
    if(seed)
      cfg.energy.seed = *seed;
    const WeightFit fit = fit_case(cfg);
    write_text(outPath, format_matrix(fit.W));
    out << "parameters = " << fit.W.rows() << "\n";
    out << "basis matrices = " << basis_size(static_cast<int>(fit.W.rows())) << "\n";
    out << "samples = " << fit.sample_count << "\n";
    out << "residual = " << fmt(fit.residual) << "\n";
    out << "positive definite = " << (fit.positive_definite ? "yes" : "no (indefinite)") << "\n";
    return 0;
  }
  catch(const Error &e)
  {
    return report(e, err);
  }
}

int cmd_energy(const std::string &config, const std::string &paramsPath, std::ostream &out, std::ostream &err)
{
  try
  {
    const CaseConfig cfg = load_config(config);
    const Eigen::VectorXd p = parse_vector(read_text(paramsPath));
    CompositeDeformation comp;
    Eigen::VectorXd weights = p;
    if(cfg.kind == CaseKind::Rod3d)
    {
      comp = rod3d_composite(rod_curve(p, cfg.geometry.height, cfg.modes.backbone_steps));
      weights = comp.parameters();
    }
    else
      comp = build_composite(cfg);

    const QuadratureDomain domain = case_domain(cfg);
    const double e = total_energy(comp, weights, domain, cfg.material);
    const double fine = total_energy(comp, weights, refined(domain, 2), cfg.material);
    const double delta = fine == e ? 0.0 : std::abs(fine - e) / std::max(std::abs(fine), std::abs(e));
    out << "energy = " << fmt(e) << " kPa cm^3\n";
    out << "refined energy = " << fmt(fine) << " kPa cm^3\n";
    out << "refinement delta = " << fmt(100.0 * delta) << " %\n";
    return 0;
  }
  catch(const Error &e)
  {
    return report(e, err);
  }
}

} // namespace

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
{
  CLI::App app{"isokin: isochoric primitive deformation solver"};
  app.require_subcommand(1);

  SolveFlags solve;
  auto *s = app.add_subcommand("solve", "solve a case configuration");
  s->add_option("config", solve.config, "case config (.ini)")->required();
  s->add_option("--solver", solve.solver, "override the configured solver")
      ->check(CLI::IsMember({"jacobian", "projgrad", "se3"}));
  s->add_option("--out", solve.out, "output directory")->capture_default_str();
  s->add_option("--seed", solve.seed, "RNG seed for weight fitting");
  s->add_option("--surface-grid", solve.surface_grid, "surface export grid NU NV")->expected(2);
  s->add_option("--weights", solve.weights, "identity, fit, or a matrix file")->capture_default_str();

  CompareFlags cmp;
  auto *c = app.add_subcommand("compare", "error metric of our nodes against FEM or experiment nodes");
  c->add_option("ours", cmp.ours, "our deformed nodes")->required();
  c->add_option("theirs", cmp.theirs, "FEM or experiment deformed nodes")->required();
  c->add_option("ref", cmp.ref, "reference (undeformed) nodes")->required();
  c->add_flag("--surface-only", cmp.surface_only, "restrict to reference nodes on the body surface");
  c->add_option("--config", cmp.config, "case config giving the body geometry");
  c->add_option("--report", cmp.report, "per-node report CSV")->capture_default_str();

  std::string fitConfig, fitOut = "weights.csv";
  std::optional<std::uint64_t> fitSeed;
  auto *f = app.add_subcommand("fit-weights", "fit the strain-energy weight matrix");
  f->add_option("config", fitConfig, "case config (.ini)")->required();
  f->add_option("--out", fitOut, "output matrix file")->capture_default_str();
  f->add_option("--seed", fitSeed, "RNG seed");

  std::string energyConfig, energyParams;
  auto *e = app.add_subcommand("energy", "total strain energy at the given weights");
  e->add_option("config", energyConfig, "case config (.ini)")->required();
  e->add_option("params", energyParams, "weights file, one value per line")->required();

  try
  {
    app.parse(argc, argv);
  }
  catch(const CLI::ParseError &pe)
  {
    const int code = app.exit(pe, out, err);
    return code == 0 ? 0 : 2;
  }

  if(s->parsed())
    return cmd_solve(solve, out, err);
  if(c->parsed())
    return cmd_compare(cmp, out, err);
  if(f->parsed())
    return cmd_fit_weights(fitConfig, fitOut, fitSeed, out, err);
  return cmd_energy(energyConfig, energyParams, out, err);
}

} // namespace isokin
