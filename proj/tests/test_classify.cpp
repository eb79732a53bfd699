#include <gtest/gtest.h>

#include "gtl/classify.hpp"
#include "gtl/datagen.hpp"
#include "gtl/error.hpp"
#include "gtl/eval.hpp"
#include "support.hpp"

using namespace gtl;

namespace {

Template make_template(const std::string& name, const std::string& text, std::vector<ParamSpec> params) {
  return Template{name, parse_formula(text), std::move(params)};
}

GraphPtr complete_graph(int n) {
  std::vector<std::string> nodes, edges;
  std::vector<std::pair<std::string, std::string>> ends;
  for (int i = 0; i < n; ++i) nodes.push_back("n" + std::to_string(i));
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      edges.push_back(nodes[static_cast<std::size_t>(a)] + "-" + nodes[static_cast<std::size_t>(b)]);
      ends.emplace_back(nodes[static_cast<std::size_t>(a)], nodes[static_cast<std::size_t>(b)]);
    }
  return std::make_shared<const LabeledGraph>(nodes, edges, ends);
}

/// Positives reach at least 3 somewhere, negatives stay below 2.
TrajectorySet threshold_data(GraphPtr g, int L, int per_class, std::uint64_t seed) {
  support::Rng rng(seed);
  TrajectorySet s;
  for (int label : {1, -1}) {
    for (int i = 0; i < per_class; ++i) {
      std::vector<std::vector<double>> x(g->node_count());
      for (auto& row : x) {
        for (int k = 0; k < L; ++k) row.push_back(rng.uniform(0, 1.9));
        if (label > 0) row[static_cast<std::size_t>(rng.uniform_int(0, L - 1))] = rng.uniform(3, 4);
      }
      Trajectory t(g, L, x, std::vector<std::vector<double>>(g->edge_count(), std::vector<double>(L, 1.0)));
      t.label = label;
      s.add(std::move(t));
    }
  }
  return s;
}

}  // namespace

TEST(Pso, FindsSeparatingThreshold) {
  auto d = threshold_data(complete_graph(4), 5, 4, 1);
  auto t = make_template("reach", "F (x >= ?c)", {{"c", 0, 5, false}});
  PsoConfig cfg;
  cfg.swarm = 10;
  cfg.iterations = 30;
  auto r = pso_minimize_mr(t, d, cfg);
  EXPECT_EQ(r.mr, 0.0);
  EXPECT_GT(r.theta.at("c"), 1.9);
  EXPECT_LE(r.theta.at("c"), 3.0);
  EXPECT_DOUBLE_EQ(misclassification_rate(d, instantiate(t.formula, r.theta)), r.mr);
}

TEST(Pso, DeterministicPerSeedAndWorkers) {
  auto d = threshold_data(complete_graph(3), 4, 3, 2);
  auto t = make_template("win", "F[<=?i] (x >= ?c)", {{"i", 0, 3, true}, {"c", 0, 5, false}});
  PsoConfig cfg;
  cfg.swarm = 8;
  cfg.iterations = 10;
  auto a = pso_minimize_mr(t, d, cfg);
  cfg.workers = 3;
  auto b = pso_minimize_mr(t, d, cfg);
  EXPECT_EQ(a.theta, b.theta);
  EXPECT_EQ(a.mr, b.mr);
  EXPECT_EQ(a.theta.at("i"), std::round(a.theta.at("i")));
}

TEST(Pso, DegenerateConfigAndValidation) {
  auto d = threshold_data(complete_graph(3), 3, 2, 3);
  auto t = make_template("reach", "F (x >= ?c)", {{"c", 0, 5, false}});
  PsoConfig cfg;
  cfg.swarm = 1;
  cfg.iterations = 0;
  auto r = pso_minimize_mr(t, d, cfg);
  EXPECT_EQ(r.evaluations, 1);
  EXPECT_THROW(cfg.validate(), Error);
  PsoConfig warm;
  warm.swarm = 2;
  warm.iterations = 1;
  auto w = pso_minimize_mr(t, d, warm, Valuation{{"c", 2.5}});
  EXPECT_EQ(w.mr, 0.0);
}

TEST(Classify, SinglePrimitiveSucceedsAtSizeZero) {
  auto d = threshold_data(complete_graph(4), 5, 5, 4);
  std::vector<Template> pool{make_template("always_low", "G (x <= ?a)", {{"a", 0, 5, false}}),
                             make_template("reach", "F (x >= ?b)", {{"b", 0, 5, false}})};
  ClassifyOptions opt;
  opt.pso.swarm = 12;
  opt.pso.iterations = 30;
  auto r = infer_classifier(d, pool, opt);
  ASSERT_TRUE(r.success);
  EXPECT_EQ(r.size, 0);
  EXPECT_LE(r.train_mr, opt.m_th);
  EXPECT_DOUBLE_EQ(misclassification_rate(d, r.formula), r.train_mr);
  EXPECT_EQ(r.stage_one.size(), 4u);
}

TEST(Classify, ConjunctionNeedsGrowing) {
  auto g = complete_graph(6);
  auto prior = support::conjunction_prior(g);
  auto sep = parse_formula(support::conjunction_separator());
  PlantedOptions popt;
  popt.min_fraction = 1.0;
  auto d = gen_planted(sep, prior, 5, 5, 3, popt);
  std::vector<Template> pool{make_template("low", "G[<=1] (x <= ?a)", {{"a", 0, 4, false}}),
                             make_template("high", "F[>=2] (x >= ?b)", {{"b", 0, 4, false}})};
  ClassifyOptions opt;
  opt.pso.swarm = 16;
  opt.pso.iterations = 40;
  auto r = infer_classifier(d, pool, opt);
  EXPECT_TRUE(r.success);
  EXPECT_GE(r.size, 1);
  EXPECT_LE(r.size, opt.eta_th);
  EXPECT_LE(r.train_mr, opt.m_th);
  EXPECT_DOUBLE_EQ(misclassification_rate(d, r.formula), r.train_mr);
}

TEST(Classify, SeedDeterminism) {
  auto d = threshold_data(complete_graph(3), 4, 3, 6);
  std::vector<Template> pool{make_template("reach", "F[<=?i] (x >= ?b)", {{"i", 0, 3, true}, {"b", 0, 5, false}})};
  ClassifyOptions opt;
  opt.pso.swarm = 6;
  opt.pso.iterations = 8;
  auto a = infer_classifier(d, pool, opt);
  auto b = infer_classifier(d, pool, opt);
  EXPECT_EQ(to_string(a.formula), to_string(b.formula));
  EXPECT_EQ(a.train_mr, b.train_mr);
  EXPECT_EQ(a.log, b.log);
}

TEST(Classify, FailureKeepsStageOneTable) {
  auto g = complete_graph(3);
  support::Rng rng(9);
  TrajectorySet d;
  for (int i = 0; i < 6; ++i) {
    auto t = support::random_trajectory(rng, g, 3);
    t.label = i % 2 ? 1 : -1;
    d.add(t);
  }
  std::vector<Template> pool{make_template("never", "G (x >= ?a)", {{"a", 10, 11, false}})};
  ClassifyOptions opt;
  opt.pso.swarm = 4;
  opt.pso.iterations = 3;
  opt.include_negations = false;
  auto r = infer_classifier(d, pool, opt);
  EXPECT_FALSE(r.success);
  EXPECT_EQ(r.stage_one.size(), 1u);
}

TEST(Classify, OptionValidation) {
  auto d = threshold_data(complete_graph(3), 3, 2, 3);
  std::vector<Template> pool{make_template("reach", "F (x >= ?c)", {{"c", 0, 5, false}})};
  ClassifyOptions opt;
  opt.m_th = 0.5;
  opt.mhat_th = 0.1;
  EXPECT_THROW(infer_classifier(d, pool, opt), Error);
  EXPECT_THROW(infer_classifier(d, {}, {}), Error);
  EXPECT_THROW(infer_classifier(TrajectorySet{}, pool, {}), Error);
}
