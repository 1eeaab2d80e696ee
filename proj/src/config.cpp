// config.cpp

#include "isokin/config.hpp"
#include "isokin/error.hpp"

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace isokin
{

namespace pt = boost::property_tree;

namespace
{

std::string trimmed(const std::string &s) { return boost::algorithm::trim_copy(s); }

double to_double(const std::string &raw, const std::string &key)
{
  const std::string s = trimmed(raw);
  double v = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if(s.empty() || ec != std::errc() || end != s.data() + s.size())
    throw Error(ErrorCode::ParseError, key + ": '" + raw + "' is not a number");
  return v;
}

template <typename Int> Int to_int(const std::string &raw, const std::string &key)
{
  const std::string s = trimmed(raw);
  Int v = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if(s.empty() || ec != std::errc() || end != s.data() + s.size())
    throw Error(ErrorCode::ParseError, key + ": '" + raw + "' is not an integer");
  return v;
}

bool to_bool(const std::string &raw, const std::string &key)
{
  const std::string s = boost::algorithm::to_lower_copy(trimmed(raw));
  if(s == "true" || s == "yes" || s == "1" || s == "on")
    return true;
  if(s == "false" || s == "no" || s == "0" || s == "off")
    return false;
  throw Error(ErrorCode::ParseError, key + ": '" + raw + "' is not a boolean");
}

Eigen::Vector3d to_vec3(const std::string &raw, const std::string &key)
{
  Eigen::VectorXd v;
  try
  {
    v = parse_vector(raw);
  }
  catch(const Error &e)
  {
    throw Error(ErrorCode::ParseError, key + ": " + e.what());
  }
  if(v.size() != 3)
    throw Error(ErrorCode::ParseError, key + " needs 3 components, got " + std::to_string(v.size()));
  return v;
}

std::vector<std::string> to_list(const std::string &raw)
{
  std::vector<std::string> parts;
  boost::algorithm::split(parts, raw, boost::is_any_of(", \t"), boost::token_compress_on);
  std::vector<std::string> out;
  for(auto &p : parts)
    if(!trimmed(p).empty())
      out.push_back(trimmed(p));
  return out;
}

using Setter = std::function<void(CaseConfig &, const std::string &value, const std::string &key)>;

const std::map<std::string, std::map<std::string, Setter>> &schema()
{
  static const std::map<std::string, std::map<std::string, Setter>> table = {
      {"geometry",
       {
           {"height", [](CaseConfig &c, const std::string &v, const std::string &k) { c.geometry.height = to_double(v, k); }},
           {"r_in", [](CaseConfig &c, const std::string &v, const std::string &k) { c.geometry.r_in = to_double(v, k); }},
           {"wall", [](CaseConfig &c, const std::string &v, const std::string &k) { c.geometry.wall = to_double(v, k); }},
           {"radius", [](CaseConfig &c, const std::string &v, const std::string &k) { c.geometry.radius = to_double(v, k); }},
           {"wx", [](CaseConfig &c, const std::string &v, const std::string &k) { c.geometry.wx = to_double(v, k); }},
           {"wy", [](CaseConfig &c, const std::string &v, const std::string &k) { c.geometry.wy = to_double(v, k); }},
       }},
      {"material",
       {
           {"name",
            [](CaseConfig &c, const std::string &v, const std::string &) {
              const std::string name = trimmed(v);
              const auto m = material_by_name(name);
              if(!m)
                throw Error(ErrorCode::InvalidArgument, "unknown material '" + name + "'");
              c.material_name = name;
              c.material = *m;
            }},
           {"c10",
            [](CaseConfig &c, const std::string &v, const std::string &k) {
              c.material.c10 = to_double(v, k);
              c.material_name = "custom";
            }},
           {"c01",
            [](CaseConfig &c, const std::string &v, const std::string &k) {
              c.material.c01 = to_double(v, k);
              c.material_name = "custom";
            }},
       }},
      {"modes",
       {
           {"stages", [](CaseConfig &c, const std::string &v, const std::string &) { c.modes.stages = to_list(v); }},
           {"count", [](CaseConfig &c, const std::string &v, const std::string &k) { c.modes.count = to_int<int>(v, k); }},
           {"counter_rotate_base",
            [](CaseConfig &c, const std::string &v, const std::string &k) { c.modes.counter_rotate_base = to_bool(v, k); }},
           {"backbone_steps",
            [](CaseConfig &c, const std::string &v, const std::string &k) { c.modes.backbone_steps = to_int<int>(v, k); }},
       }},
      {"solver",
       {
           {"method",
            [](CaseConfig &c, const std::string &v, const std::string &) { c.solver_kind = parse_solver(trimmed(v)); }},
           {"max_iters", [](CaseConfig &c, const std::string &v, const std::string &k) { c.solver.max_iters = to_int<int>(v, k); }},
           {"tol", [](CaseConfig &c, const std::string &v, const std::string &k) { c.solver.tol = to_double(v, k); }},
           {"fd_step", [](CaseConfig &c, const std::string &v, const std::string &k) { c.solver.fd_step = to_double(v, k); }},
           {"step_fraction",
            [](CaseConfig &c, const std::string &v, const std::string &k) { c.solver.step_fraction = to_double(v, k); }},
           {"alpha", [](CaseConfig &c, const std::string &v, const std::string &k) { c.solver.alpha = to_double(v, k); }},
           {"damping", [](CaseConfig &c, const std::string &v, const std::string &k) { c.solver.damping = to_double(v, k); }},
           {"damping_threshold",
            [](CaseConfig &c, const std::string &v, const std::string &k) { c.solver.damping_threshold = to_double(v, k); }},
           {"trajectory_steps",
            [](CaseConfig &c, const std::string &v, const std::string &k) { c.solver.trajectory_steps = to_int<int>(v, k); }},
           {"dt", [](CaseConfig &c, const std::string &v, const std::string &k) { c.solver.dt = to_double(v, k); }},
           {"initial",
            [](CaseConfig &c, const std::string &v, const std::string &k) {
              try
              {
                c.initial = parse_vector(v);
              }
              catch(const Error &e)
              {
                throw Error(ErrorCode::ParseError, k + ": " + e.what());
              }
            }},
       }},
      {"targets",
       {
           {"displacement",
            [](CaseConfig &c, const std::string &v, const std::string &k) { c.targets.displacement = to_vec3(v, k); }},
           {"rotation", [](CaseConfig &c, const std::string &v, const std::string &k) { c.targets.rotation = to_vec3(v, k); }},
           {"volume", [](CaseConfig &c, const std::string &v, const std::string &k) { c.targets.volume = to_double(v, k); }},
           // gas_* are collected separately: all four or none
       }},
      {"energy",
       {
           {"grid",
            [](CaseConfig &c, const std::string &v, const std::string &k) {
              const auto parts = to_list(v);
              if(parts.size() != 3)
                throw Error(ErrorCode::ParseError, k + " needs 3 integers");
              c.energy.grid = std::array<int, 3>{to_int<int>(parts[0], k), to_int<int>(parts[1], k),
                                                 to_int<int>(parts[2], k)};
            }},
           {"samples", [](CaseConfig &c, const std::string &v, const std::string &k) { c.energy.sample_count = to_int<int>(v, k); }},
           {"magnitude", [](CaseConfig &c, const std::string &v, const std::string &k) { c.energy.magnitude = to_double(v, k); }},
           {"seed",
            [](CaseConfig &c, const std::string &v, const std::string &k) { c.energy.seed = to_int<std::uint64_t>(v, k); }},
       }},
  };
  return table;
}

const std::set<std::string> gas_keys = {"gas_vb", "gas_pb", "gas_pa", "gas_vi"};

nlohmann::json vec_json(const Eigen::VectorXd &v) { return std::vector<double>(v.data(), v.data() + v.size()); }

} // namespace

CaseConfig parse_config(const std::string &text)
{
  pt::ptree tree;
  try
  {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  }
  catch(const pt::ini_parser_error &e)
  {
    throw Error(ErrorCode::ParseError, e.message(), e.line());
  }

  const auto tag = tree.get_optional<std::string>("case");
  if(!tag)
    throw Error(ErrorCode::InvalidArgument, "config has no top-level 'case' key");
  CaseConfig cfg = default_case(parse_case(trimmed(*tag)));

  std::map<std::string, double> gas;
  for(const auto &[section, body] : tree)
  {
    if(section == "case")
      continue;
    const auto sec = schema().find(section);
    if(sec == schema().end())
      throw Error(ErrorCode::InvalidArgument, "unknown section or top-level key '" + section + "'");
    for(const auto &[key, node] : body)
    {
      const std::string full = section + "." + key;
      const std::string value = node.get_value<std::string>();
      if(section == "targets" && gas_keys.count(key))
      {
        gas[key] = to_double(value, full);
        continue;
      }
      const auto set = sec->second.find(key);
      if(set == sec->second.end())
        throw Error(ErrorCode::InvalidArgument, "unknown key '" + full + "'");
      set->second(cfg, value, full);
    }
  }
  if(!gas.empty())
  {
    if(gas.size() != gas_keys.size())
      throw Error(ErrorCode::InvalidArgument, "gas correction needs all of gas_vb, gas_pb, gas_pa, gas_vi");
    cfg.targets.gas = GasCorrection{gas["gas_vb"], gas["gas_pb"], gas["gas_pa"], gas["gas_vi"]};
  }

  cfg.validate();
  if(cfg.kind != CaseKind::Rod3d)
    build_composite(cfg).validate_order();
  return cfg;
}

CaseConfig load_config(const std::filesystem::path &path) { return parse_config(read_text(path)); }

nlohmann::json config_snapshot(const CaseConfig &cfg)
{
  nlohmann::json j;
  j["case"] = std::string(to_string(cfg.kind));
  j["geometry"] = {{"height", cfg.geometry.height}, {"r_in", cfg.geometry.r_in}, {"wall", cfg.geometry.wall},
                   {"radius", cfg.geometry.radius}, {"wx", cfg.geometry.wx},     {"wy", cfg.geometry.wy}};
  j["material"] = {{"name", cfg.material_name}, {"c10", cfg.material.c10}, {"c01", cfg.material.c01}};
  j["modes"] = {{"stages", cfg.modes.stages},
                {"count", cfg.modes.count},
                {"counter_rotate_base", cfg.modes.counter_rotate_base},
                {"backbone_steps", cfg.modes.backbone_steps}};
  const IKOptions &s = cfg.solver;
  j["solver"] = {{"method", std::string(to_string(cfg.solver_kind))},
                 {"max_iters", s.max_iters},
                 {"tol", s.tol},
                 {"fd_step", s.fd_step},
                 {"step_fraction", s.step_fraction},
                 {"alpha", s.alpha},
                 {"damping", s.damping},
                 {"damping_threshold", s.damping_threshold},
                 {"trajectory_steps", s.trajectory_steps},
                 {"dt", s.time_step()}};
  if(cfg.initial)
    j["solver"]["initial"] = vec_json(*cfg.initial);
  j["targets"] = {{"displacement", vec_json(cfg.targets.displacement)},
                  {"rotation", vec_json(cfg.targets.rotation)},
                  {"volume", cfg.targets.volume}};
  if(cfg.targets.gas)
    j["targets"]["gas"] = {{"vb", cfg.targets.gas->vb},
                           {"pb", cfg.targets.gas->pb},
                           {"pa", cfg.targets.gas->pa},
                           {"vi", cfg.targets.gas->vi}};
  j["energy"] = {{"samples", cfg.energy.sample_count},
                 {"magnitude", cfg.energy.magnitude},
                 {"seed", cfg.energy.seed}};
  if(cfg.energy.grid)
    j["energy"]["grid"] = *cfg.energy.grid;
  return j;
}

Eigen::VectorXd parse_vector(const std::string &text)
{
  const auto parts = to_list(boost::algorithm::replace_all_copy(text, "\n", " "));
  Eigen::VectorXd v(static_cast<Eigen::Index>(parts.size()));
  for(std::size_t i = 0; i < parts.size(); ++i)
    v[static_cast<Eigen::Index>(i)] = to_double(parts[i], "entry " + std::to_string(i + 1));
  if(!v.allFinite())
    throw Error(ErrorCode::NonFinite, "vector has non-finite entries");
  return v;
}

Eigen::MatrixXd parse_matrix(const std::string &text)
{
  std::vector<Eigen::VectorXd> rows;
  std::istringstream in(text);
  std::string line;
  std::size_t lineNo = 0;
  while(std::getline(in, line))
  {
    ++lineNo;
    if(trimmed(line).empty())
      continue;
    try
    {
      rows.push_back(parse_vector(line));
    }
    catch(const Error &e)
    {
      throw Error(e.code(), "line " + std::to_string(lineNo) + ": " + e.what(), lineNo);
    }
    if(rows.back().size() != rows.front().size())
      throw Error(ErrorCode::ParseError, "line " + std::to_string(lineNo) + " has " +
                                             std::to_string(rows.back().size()) + " columns, expected " +
                                             std::to_string(rows.front().size()),
                  lineNo);
  }
  if(rows.empty())
    throw Error(ErrorCode::ParseError, "matrix file is empty");
  Eigen::MatrixXd M(static_cast<Eigen::Index>(rows.size()), rows.front().size());
  for(std::size_t i = 0; i < rows.size(); ++i)
    M.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
  return M;
}

std::string format_matrix(const Eigen::MatrixXd &M)
{
  std::string out;
  char buf[32];
  for(Eigen::Index i = 0; i < M.rows(); ++i)
  {
    for(Eigen::Index j = 0; j < M.cols(); ++j)
    {
      std::snprintf(buf, sizeof buf, "%.17g", M(i, j));
      if(j)
        out += ',';
      out += buf;
    }
    out += '\n';
  }
  return out;
}

std::string read_text(const std::filesystem::path &path)
{
  std::ifstream in(path, std::ios::binary);
  if(!in)
    throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace isokin
