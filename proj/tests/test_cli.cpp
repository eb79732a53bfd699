#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

struct CliRun {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path scratch() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("gtl_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

CliRun run(const std::string& args) {
  const fs::path err = scratch() / "stderr.txt";
  std::string cmd = "cd '" + std::string(GTL_FIXTURES) + "' && '" + GTL_CLI_PATH + "' " + args + " 2>'" +
                    err.string() + "'";
  CliRun r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  int status = ::pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.err = slurp(err);
  return r;
}

TEST(Cli, Version) {
  CliRun r = run("--version");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("gtl "), std::string::npos);
}

TEST(Cli, EvalEnvelope) {
  CliRun r = run("eval --trajectories example_trajectory.json --formula 'x >= 1'");
  ASSERT_EQ(r.code, 0) << r.err;
  json j = json::parse(r.out);
  for (const char* key : {"tool", "version", "command", "config", "result", "timings"}) EXPECT_TRUE(j.contains(key));
  EXPECT_EQ(j["command"], "eval");
  EXPECT_EQ(j["result"]["per_trajectory"][0]["satisfied_nodes"], json({"v1", "v2", "v4", "v5"}));
  EXPECT_NEAR(j["result"]["coverage"].get<double>(), 4.0 / 6.0, 1e-12);
}

TEST(Cli, EvalSingleNode) {
  CliRun r = run("eval --trajectories example_trajectory.json --formula 'E 1 via (y <= 1) : (x <= 0)' --node v2");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("v2"), std::string::npos);
}

TEST(Cli, NoTimingsIsDeterministic) {
  const std::string args = "dfa --formula 'G[<=2] (x >= 1) | F (x <= 0)' --L 3 --no-timings";
  CliRun a = run(args), b = run(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  json j = json::parse(a.out);
  EXPECT_FALSE(j.contains("timings"));
  EXPECT_GT(j["result"]["state_count"].get<int>(), 0);
}

TEST(Cli, DfaDot) {
  const fs::path dot = scratch() / "a.dot";
  CliRun r = run("dfa --formula 'F (x >= 1)' --L 2 --dot '" + dot.string() + "'");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(slurp(dot).find("digraph"), std::string::npos);
}

TEST(Cli, InformationGain) {
  CliRun r = run("ig --prior single_node_prior.json --formula 'x >= 1' --no-timings");
  ASSERT_EQ(r.code, 0) << r.err;
  json j = json::parse(r.out);
  EXPECT_NEAR(j["result"]["nodes"][0]["probability"].get<double>(), 0.5, 1e-12);
  EXPECT_NEAR(j["result"]["average"].get<double>(), std::log(2.0) / 2.0, 1e-12);
}

TEST(Cli, TextFormat) {
  CliRun r = run("--format text ig --prior single_node_prior.json --formula 'x >= 1' --no-timings");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("probability: 0.5"), std::string::npos);
}

TEST(Cli, ParseErrorIsReportedAsJson) {
  CliRun r = run("eval --trajectories example_trajectory.json --formula 'x >= '");
  EXPECT_EQ(r.code, 1);
  json e = json::parse(r.err)["error"];
  EXPECT_EQ(e["code"], "parse_error");
  EXPECT_EQ(e["line"], 1);
  EXPECT_EQ(e["column"], 6);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run("templates --family I --no-such-flag").code, 1);
  EXPECT_EQ(run("").code, 1);
  EXPECT_EQ(run("dfa --formula 'x >= 1' --L 0").code, 1);
  EXPECT_EQ(run("eval --trajectories missing.json --formula 'x >= 1'").code, 1);
}

TEST(Cli, TemplatesLibrary) {
  CliRun r = run("templates --family I --prior single_node_prior.json");
  ASSERT_EQ(r.code, 0) << r.err;
  json j = json::parse(r.out);
  ASSERT_TRUE(j.is_array());
  EXPECT_FALSE(j.empty());
  for (const auto& t : j) {
    EXPECT_TRUE(t.contains("name"));
    EXPECT_TRUE(t.contains("formula"));
  }
}

TEST(Cli, GenSwarmWritesFile) {
  const fs::path out = scratch() / "swarm.json";
  CliRun r = run("--seed 3 --out '" + out.string() + "' gen swarm --n 2 --L 4");
  ASSERT_EQ(r.code, 0) << r.err;
  json summary = json::parse(r.out);
  EXPECT_EQ(summary["result"]["trajectories"], 2);
  json data = json::parse(slurp(out));
  EXPECT_FALSE(data.is_null());

  const fs::path again = scratch() / "swarm2.json";
  ASSERT_EQ(run("--seed 3 --out '" + again.string() + "' gen swarm --n 2 --L 4").code, 0);
  EXPECT_EQ(slurp(out), slurp(again));
}

TEST(Cli, IdentifyWithoutFeasibleTemplateExitsTwo) {
  // Labels stay below 2 so no threshold in [2, 3] is ever reached.
  const fs::path traj = scratch() / "low.json";
  std::ofstream(traj) << R"J({"graph": {"nodes": ["a"], "edges": []},
    "trajectories": [{"L": 2, "node_labels": {"a": [0.5, 1.5]}}]})J";
  const fs::path tpl = scratch() / "high.json";
  std::ofstream(tpl) << R"J([{"name": "high", "formula": "F (x >= ?c)",
    "params": {"c": {"min": 2, "max": 3}}}])J";
  CliRun r = run("identify --trajectories '" + traj.string() + "' --prior single_node_prior.json --templates '" +
              tpl.string() + "' --pth 1 --no-timings");
  EXPECT_EQ(r.code, 2) << r.err;
  json j = json::parse(r.out);
  EXPECT_FALSE(j["result"]["results"][0]["feasible"].get<bool>());
}

TEST(Cli, IdentifyFindsThreshold) {
  const fs::path tpl = scratch() / "reach.json";
  std::ofstream(tpl) << R"J([{"name": "reach", "formula": "F (x >= ?c)",
    "params": {"c": {"min": 0, "max": 2}}}])J";
  const fs::path traj = scratch() / "one.json";
  std::ofstream(traj) << R"J({"graph": {"nodes": ["a"], "edges": []},
    "trajectories": [{"L": 2, "node_labels": {"a": [0.5, 1.5]}}]})J";
  CliRun r = run("identify --trajectories '" + traj.string() + "' --prior single_node_prior.json --templates '" +
              tpl.string() + "' --pth 1 --no-timings");
  ASSERT_EQ(r.code, 0) << r.err;
  json j = json::parse(r.out);
  EXPECT_TRUE(j["result"]["results"][0]["feasible"].get<bool>());
}

}  // namespace
