#include <gtest/gtest.h>

#include <cmath>
#include <string>

#include "gtl/gtl.h"
#include "json.hpp"

using json = nlohmann::json;

namespace {

const std::string fixtures = GTL_FIXTURES;

std::string take(char* s) {
  std::string out = s ? s : "";
  gtl_string_free(s);
  return out;
}

}  // namespace

TEST(CApi, VersionAndStatusNames) {
  EXPECT_STRNE(gtl_version(), "");
  EXPECT_STREQ(gtl_status_name(GTL_OK), "ok");
  EXPECT_STRNE(gtl_status_name(GTL_ERR_PARSE), gtl_status_name(GTL_ERR_INPUT));
}

TEST(CApi, ParseErrorDetails) {
  gtl_formula* f = nullptr;
  EXPECT_EQ(gtl_formula_parse("F[<= ] (x >= 1)", &f), GTL_ERR_PARSE);
  EXPECT_EQ(f, nullptr);
  auto err = json::parse(gtl_last_error_json());
  EXPECT_EQ(err["line"], 1);
  EXPECT_EQ(err["column"], 6);
  EXPECT_TRUE(err["expected"].is_array());
  EXPECT_STRNE(gtl_last_error(), "");
  ASSERT_EQ(gtl_formula_parse("x >= 1", &f), GTL_OK);
  EXPECT_STREQ(gtl_last_error(), "");
  gtl_formula_free(f);
}

TEST(CApi, EvaluateExampleGraph) {
  gtl_trajset* s = nullptr;
  ASSERT_EQ(gtl_trajset_load((fixtures + "/example_trajectory.json").c_str(), nullptr, &s), GTL_OK) << gtl_last_error();
  gtl_formula* f = nullptr;
  ASSERT_EQ(gtl_formula_parse("E 2 via (y <= 1) : (x >= 1)", &f), GTL_OK);
  int sat = -1;
  EXPECT_EQ(gtl_sat(s, 0, f, "v4", 1, &sat), GTL_OK);
  EXPECT_EQ(sat, 1);
  EXPECT_EQ(gtl_sat(s, 0, f, "v1", 1, &sat), GTL_OK);
  EXPECT_EQ(sat, 0);
  EXPECT_EQ(gtl_sat(s, 0, f, "nope", 1, &sat), GTL_ERR_INPUT);
  EXPECT_EQ(gtl_sat(s, 3, f, "v1", 1, &sat), GTL_ERR_RANGE);
  double cov = 0;
  EXPECT_EQ(gtl_coverage(s, f, 1, &cov), GTL_OK);
  EXPECT_DOUBLE_EQ(cov, 2.0 / 6.0);
  double mr = 0;
  EXPECT_EQ(gtl_misclassification_rate(s, f, 1, &mr), GTL_ERR_INPUT);
  char* report = nullptr;
  ASSERT_EQ(gtl_eval_report(s, f, "{}", &report), GTL_OK);
  auto j = json::parse(take(report));
  EXPECT_DOUBLE_EQ(j["coverage"].get<double>(), 2.0 / 6.0);
  gtl_formula* p = nullptr;
  ASSERT_EQ(gtl_formula_parse("x >= ?c", &p), GTL_OK);
  EXPECT_EQ(gtl_coverage(s, p, 1, &cov), GTL_ERR_USAGE);
  gtl_formula* inst = nullptr;
  ASSERT_EQ(gtl_formula_instantiate(p, "{\"c\": 2}", &inst), GTL_OK);
  EXPECT_EQ(gtl_coverage(s, inst, 1, &cov), GTL_OK);
  EXPECT_DOUBLE_EQ(cov, 2.0 / 6.0);
  gtl_formula_free(inst);
  gtl_formula_free(p);
  gtl_formula_free(f);
  gtl_trajset_free(s);
}

TEST(CApi, ProbabilityAndAutomaton) {
  gtl_prior* prior = nullptr;
  ASSERT_EQ(gtl_prior_load((fixtures + "/single_node_prior.json").c_str(), nullptr, &prior), GTL_OK) << gtl_last_error();
  gtl_formula* f = nullptr;
  ASSERT_EQ(gtl_formula_parse("F[<=1] (x >= 1)", &f), GTL_OK);
  double p = 0;
  ASSERT_EQ(gtl_probability(prior, f, "a", &p), GTL_OK);
  EXPECT_NEAR(p, 0.75, 1e-12);
  char* report = nullptr;
  ASSERT_EQ(gtl_ig_report(prior, f, nullptr, &report), GTL_OK);
  auto j = json::parse(take(report));
  EXPECT_NEAR(j["average"].get<double>(), -std::log(0.75) / 2, 1e-12);
  char* dfa = nullptr;
  char* dot = nullptr;
  ASSERT_EQ(gtl_dfa_report(f, 2, &dfa, &dot), GTL_OK);
  EXPECT_TRUE(json::parse(take(dfa)).contains("states"));
  EXPECT_NE(take(dot).find("digraph"), std::string::npos);
  gtl_formula* g = nullptr;
  ASSERT_EQ(gtl_formula_parse("G F (x >= 1)", &g), GTL_OK);
  EXPECT_EQ(gtl_dfa_report(g, 2, &dfa, nullptr), GTL_ERR_SCOPE);
  gtl_formula_free(g);
  gtl_formula_free(f);
  gtl_prior_free(prior);
}

TEST(CApi, GenerateIdentifyClassify) {
  gtl_trajset* s = nullptr;
  char* stats = nullptr;
  ASSERT_EQ(gtl_gen_swarm("{\"n\": 3, \"L\": 6, \"seed\": 5}", &s, &stats), GTL_OK) << gtl_last_error();
  EXPECT_EQ(json::parse(take(stats))["accepted"], 3);
  size_t n = 0;
  gtl_trajset_size(s, &n);
  EXPECT_EQ(n, 3u);
  char* text = nullptr;
  ASSERT_EQ(gtl_trajset_to_json(s, &text), GTL_OK);
  auto traj = json::parse(take(text));
  EXPECT_EQ(traj["trajectories"].size(), 3u);

  gtl_prior* prior = nullptr;
  ASSERT_EQ(gtl_prior_load((fixtures + "/single_node_prior.json").c_str(), nullptr, &prior), GTL_OK);
  const char* reach = R"J([{"name": "reach", "formula": "F (x >= ?c)", "params": {"c": {"min": 0, "max": 1}}}])J";
  EXPECT_EQ(gtl_identify(s, prior, reach, "{}", &text), GTL_ERR_INPUT);
  gtl_prior_free(prior);

  std::string path = fixtures + "/labeled_path.json";
  gtl_trajset* d = nullptr;
  ASSERT_EQ(gtl_trajset_load(path.c_str(), nullptr, &d), GTL_OK) << gtl_last_error();
  const char* templates = R"J([{"name": "reach", "formula": "F (x >= ?c)", "params": {"c": {"min": 0, "max": 6}}}])J";
  char* out = nullptr;
  ASSERT_EQ(gtl_classify(d, templates, "{\"swarm\": 8, \"iterations\": 20}", &out), GTL_OK) << gtl_last_error();
  auto cj = json::parse(take(out));
  EXPECT_TRUE(cj["success"].get<bool>());
  EXPECT_EQ(cj["train_mr"], 0.0);
  EXPECT_EQ(gtl_classify(d, templates, "{\"swarm\": \"many\"}", &out), GTL_ERR_INPUT);
  gtl_trajset_free(d);
  gtl_trajset_free(s);
}

TEST(CApi, NullArguments) {
  EXPECT_NE(gtl_formula_parse(nullptr, nullptr), GTL_OK);
  size_t n = 0;
  EXPECT_NE(gtl_trajset_size(nullptr, &n), GTL_OK);
  gtl_formula_free(nullptr);
  gtl_trajset_free(nullptr);
  gtl_string_free(nullptr);
}
