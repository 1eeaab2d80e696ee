// test_cli.cpp

#include "isokin/cli.hpp"
#include "isokin/harness.hpp"

#include "json.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace isokin;
namespace fs = std::filesystem;

namespace
{

struct CliRun
{
  int code;
  std::string out, err;
};

CliRun run(std::vector<std::string> args)
{
  args.insert(args.begin(), "isokin");
  std::vector<const char *> argv;
  for(const auto &a : args)
    argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string config(const std::string &name) { return std::string(ISOKIN_SOURCE_DIR) + "/configs/" + name + ".ini"; }

fs::path scratch(const std::string &name)
{
  const fs::path p = fs::temp_directory_path() / ("isokin_cli_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path &p)
{
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

void spit(const fs::path &p, const std::string &s) { std::ofstream(p, std::ios::binary) << s; }

} // namespace

TEST(Cli, SolveBlockWritesManifest)
{
  const fs::path dir = scratch("block");
  const CliRun r = run({"solve", config("block"), "--out", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto m = nlohmann::json::parse(slurp(dir / "manifest.json"));
  EXPECT_LT(m["result"]["residual"].get<double>(), 1e-6);
  EXPECT_TRUE(m["error"].is_null());
  EXPECT_TRUE(m["timings_ms"].contains("solve"));
  EXPECT_EQ(m["config"]["case"], "block");
  for(const char *f : {"points.csv", "surface.obj", "trace.csv", "params.csv"})
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  EXPECT_NE(r.out.find("residual = "), std::string::npos);
}

TEST(Cli, SolveIsDeterministic)
{
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  ASSERT_EQ(run({"solve", config("block"), "--out", a.string(), "--seed", "5"}).code, 0);
  ASSERT_EQ(run({"solve", config("block"), "--out", b.string(), "--seed", "5"}).code, 0);
  EXPECT_EQ(slurp(a / "points.csv"), slurp(b / "points.csv"));
  EXPECT_EQ(slurp(a / "surface.obj"), slurp(b / "surface.obj"));
}

TEST(Cli, BendNotLastExitsTwo)
{
  const fs::path dir = scratch("order");
  fs::create_directories(dir);
  spit(dir / "bad.ini", "case = block\n[modes]\nstages = twist, bend, shear\n");
  const CliRun r = run({"solve", (dir / "bad.ini").string(), "--out", (dir / "out").string()});
  EXPECT_EQ(r.code, 2);
  const auto err = nlohmann::json::parse(r.err);
  EXPECT_EQ(err["error"], "OrderViolation");
  // the manifest is still written
  const auto m = nlohmann::json::parse(slurp(dir / "out" / "manifest.json"));
  EXPECT_EQ(m["error"]["error"], "OrderViolation");
}

TEST(Cli, NoConvergenceExitsOne)
{
  const fs::path dir = scratch("noconv");
  fs::create_directories(dir);
  spit(dir / "short.ini", "case = block\n[solver]\nmax_iters = 3\n");
  const CliRun r = run({"solve", (dir / "short.ini").string(), "--out", (dir / "out").string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(nlohmann::json::parse(r.err)["error"], "NoConvergence");
  const auto m = nlohmann::json::parse(slurp(dir / "out" / "manifest.json"));
  EXPECT_EQ(m["trace"].size(), 4u);
}

TEST(Cli, SolverOverrideAndWeightsFile)
{
  const fs::path dir = scratch("override");
  fs::create_directories(dir);
  spit(dir / "w.csv", "1,0,0,0,0,0,0,0,0\n0,1,0,0,0,0,0,0,0\n0,0,1,0,0,0,0,0,0\n0,0,0,1,0,0,0,0,0\n"
                      "0,0,0,0,1,0,0,0,0\n0,0,0,0,0,1,0,0,0\n0,0,0,0,0,0,1,0,0\n0,0,0,0,0,0,0,1,0\n"
                      "0,0,0,0,0,0,0,0,1\n");
  const CliRun r = run({"solve", config("block"), "--solver", "se3", "--weights", (dir / "w.csv").string(), "--out",
                     (dir / "out").string(), "--surface-grid", "5", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto m = nlohmann::json::parse(slurp(dir / "out" / "manifest.json"));
  EXPECT_EQ(m["config"]["solver"]["method"], "se3");
  EXPECT_EQ(run({"solve", config("block"), "--solver", "newton"}).code, 2);
}

TEST(Cli, CompareIdenticalAndSynthetic)
{
  const fs::path dir = scratch("compare");
  fs::create_directories(dir);
  std::mt19937_64 rng(61);
  std::normal_distribution<double> g;
  NodeSet o, a, f;
  double num = 0, den = 0;
  for(int i = 1; i <= 10; ++i)
  {
    const Eigen::Vector3d x(g(rng), g(rng), g(rng)), da(g(rng), g(rng), g(rng)), df(g(rng), g(rng), g(rng));
    o.ids.push_back(i);
    a.ids.push_back(i);
    f.ids.push_back(i);
    o.points.push_back(x);
    a.points.push_back(x + da);
    f.points.push_back(x + df);
  }
  write_nodes(dir / "o.csv", o);
  write_nodes(dir / "a.csv", a);
  write_nodes(dir / "f.csv", f);
  // hand summation from the written text
  const NodeSet o2 = ingest_nodes(dir / "o.csv"), a2 = ingest_nodes(dir / "a.csv"), f2 = ingest_nodes(dir / "f.csv");
  for(int i = 0; i < 10; ++i)
  {
    num += (a2.points[i] - f2.points[i]).squaredNorm();
    den += (a2.points[i] - o2.points[i]).squaredNorm();
  }

  CliRun r = run({"compare", (dir / "a.csv").string(), (dir / "a.csv").string(), (dir / "o.csv").string(), "--report",
               (dir / "rep.csv").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("E = 0\n"), std::string::npos) << r.out;

  r = run({"compare", (dir / "f.csv").string(), (dir / "a.csv").string(), (dir / "o.csv").string(), "--report",
           (dir / "rep.csv").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const double E = std::stod(r.out.substr(r.out.find("E = ") + 4));
  EXPECT_NEAR(E, std::sqrt(num / den), 1e-15);
  EXPECT_EQ(slurp(dir / "rep.csv").substr(0, 7), "id,e,d\n");
}

TEST(Cli, CompareMissingHeaderIsParseError)
{
  const fs::path dir = scratch("nohdr");
  fs::create_directories(dir);
  spit(dir / "n.csv", "1,0,0,0\n");
  const CliRun r = run({"compare", (dir / "n.csv").string(), (dir / "n.csv").string(), (dir / "n.csv").string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(nlohmann::json::parse(r.err)["error"], "ParseError");
}

TEST(Cli, CompareSurfaceOnly)
{
  const fs::path dir = scratch("surf");
  fs::create_directories(dir);
  NodeSet o, a, f;
  // node 1 on the block side, node 2 interior with a large model error
  o.ids = a.ids = f.ids = {1, 2};
  o.points = {Eigen::Vector3d(1.5, 0, 3), Eigen::Vector3d(0, 0, 3)};
  a.points = {Eigen::Vector3d(1.7, 0, 3), Eigen::Vector3d(0.2, 0, 3)};
  f.points = {Eigen::Vector3d(1.7, 0, 3), Eigen::Vector3d(0.9, 0, 3)};
  write_nodes(dir / "o.csv", o);
  write_nodes(dir / "a.csv", a);
  write_nodes(dir / "f.csv", f);
  const CliRun r = run({"compare", (dir / "f.csv").string(), (dir / "a.csv").string(), (dir / "o.csv").string(),
                     "--surface-only", "--config", config("block"), "--report", (dir / "r.csv").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("E = 0\n"), std::string::npos);
  EXPECT_NE(r.out.find("nodes = 1\n"), std::string::npos);
  EXPECT_EQ(run({"compare", (dir / "f.csv").string(), (dir / "a.csv").string(), (dir / "o.csv").string(),
                 "--surface-only"})
                .code,
            2);
}

TEST(Cli, FitWeightsBlock)
{
  const fs::path dir = scratch("fit");
  fs::create_directories(dir);
  const CliRun r = run({"fit-weights", config("block"), "--out", (dir / "W.csv").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("basis matrices = 45\n"), std::string::npos);
  EXPECT_NE(r.out.find("positive definite = "), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "W.csv"));

  spit(dir / "few.ini", "case = block\n[energy]\nsamples = 44\n");
  EXPECT_EQ(run({"fit-weights", (dir / "few.ini").string(), "--out", (dir / "W2.csv").string()}).code, 2);
  EXPECT_EQ(run({"fit-weights", config("rod3d"), "--out", (dir / "W3.csv").string()}).code, 2);
}

TEST(Cli, EnergyZeroAndSmall)
{
  const fs::path dir = scratch("energy");
  fs::create_directories(dir);
  spit(dir / "zero.csv", "0\n0\n0\n0\n0\n0\n0\n0\n0\n");
  CliRun r = run({"energy", config("block"), (dir / "zero.csv").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("energy = 0 kPa cm^3\n"), std::string::npos) << r.out;

  spit(dir / "small.csv", "0.01\n0.005\n-0.001\n0.01\n0.01\n0.02\n0.01\n0\n0\n");
  r = run({"energy", config("block"), (dir / "small.csv").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const double delta = std::stod(r.out.substr(r.out.find("refinement delta = ") + 19));
  EXPECT_LT(delta, 1.0);

  spit(dir / "wrong.csv", "0\n0\n");
  EXPECT_EQ(run({"energy", config("block"), (dir / "wrong.csv").string()}).code, 2);
}

TEST(Cli, UsageErrorsExitTwo)
{
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"bogus"}).code, 2);
  EXPECT_EQ(run({"solve"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
  EXPECT_EQ(run({"solve", "/nonexistent.ini", "--out", scratch("missing").string()}).code, 1);
}
