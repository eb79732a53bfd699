#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "gtl/datagen.hpp"
#include "gtl/error.hpp"
#include "gtl/eval.hpp"
#include "support.hpp"

using namespace gtl;

namespace {

GraphPtr pair_graph() {
  return std::make_shared<const LabeledGraph>(std::vector<std::string>{"a", "b"}, std::vector<std::string>{"ab"},
                                              std::vector<std::pair<std::string, std::string>>{{"a", "b"}});
}

PriorModel two_bin(GraphPtr g, int L) {
  std::vector<std::vector<std::vector<double>>> pmf(
      g->node_count(), std::vector<std::vector<double>>(static_cast<std::size_t>(L), {0.5, 0.5}));
  return PriorModel(g, L, {{0, 1}, {1, 2}}, pmf, std::vector<double>(g->edge_count(), 1.5));
}

int code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return static_cast<int>(e.code());
  }
  return 0;
}

}  // namespace

TEST(SamplePrior, PointMassIsConstant) {
  auto g = pair_graph();
  PriorModel p(g, 3, {{2, 2}, {3, 4}}, {{{1, 0}, {1, 0}, {1, 0}}, {{1, 0}, {1, 0}, {1, 0}}}, {1.0});
  auto s = sample_prior(p, 5, 1);
  ASSERT_EQ(s.size(), 5u);
  for (const auto& t : s.items)
    for (int v = 0; v < 2; ++v)
      for (int k = 1; k <= 3; ++k) EXPECT_EQ(t.x(v, k), 2.0);
  EXPECT_EQ(sample_prior(p, 0, 1).size(), 0u);
}

TEST(SamplePrior, BinFrequencies) {
  auto g = pair_graph();
  auto p = two_bin(g, 1);
  const int n = 4000;
  auto s = sample_prior(p, n, 3);
  int low = 0;
  for (const auto& t : s.items) {
    EXPECT_EQ(t.y(0, 1), 1.5);
    if (t.x(0, 1) < 1) ++low;
  }
  double sigma = std::sqrt(n * 0.25);
  EXPECT_NEAR(low, n / 2.0, 3 * sigma);
  auto again = sample_prior(p, 10, 3);
  for (std::size_t i = 0; i < 10; ++i) EXPECT_EQ(again.items[i].x(1, 1), s.items[i].x(1, 1));
}

TEST(Swarm, TrajectoriesSatisfyConstraintAndAreDensities) {
  SwarmScenario sc;
  sc.horizon = 8;
  GenerationStats stats;
  auto s = gen_swarm(sc, 5, &stats);
  ASSERT_EQ(s.size(), 5u);
  EXPECT_GE(stats.proposals, stats.accepted);
  auto c = swarm_constraint();
  for (const auto& t : s.items) {
    auto ok = satisfied_nodes(t, c);
    EXPECT_TRUE(std::all_of(ok.begin(), ok.end(), [](bool b) { return b; }));
    for (int k = 1; k <= t.length(); ++k) {
      double sum = 0;
      for (int v = 0; v < 9; ++v) sum += t.x(v, k);
      EXPECT_NEAR(sum, 1.0, 1e-12);
    }
  }
  const auto& g = *s.graph;
  EXPECT_EQ(g.node_count(), 9u);
  EXPECT_EQ(g.edge_count(), 36u);
  EXPECT_DOUBLE_EQ(s.items[0].y(g.edge_index("c11-c12"), 1), 1.0);
  EXPECT_DOUBLE_EQ(s.items[0].y(g.edge_index("c11-c22"), 1), std::sqrt(2.0));
}

TEST(Swarm, DeterministicAcrossWorkers) {
  SwarmScenario sc;
  sc.horizon = 6;
  auto a = gen_swarm(sc, 3);
  sc.workers = 3;
  auto b = gen_swarm(sc, 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (int k = 1; k <= 6; ++k) EXPECT_EQ(a.items[i].x(4, k), b.items[i].x(4, k));
}

TEST(Swarm, CapAndValidation) {
  SwarmScenario sc;
  sc.max_proposals = 3;
  sc.concentration = 0.01;
  EXPECT_EQ(code_of([&] { gen_swarm(sc, 50); }), static_cast<int>(ErrorCode::Infeasible));
  SwarmScenario bad;
  bad.smoothing = 0;
  EXPECT_EQ(code_of([&] { gen_swarm(bad, 1); }), static_cast<int>(ErrorCode::Range));
  EXPECT_NE(swarm_constraint_text().find("0.1111111111111111"), std::string::npos);
}

TEST(Planted, ConstantSeparators) {
  auto p = two_bin(pair_graph(), 2);
  EXPECT_EQ(code_of([&] { gen_planted(make_true(), p, 2, 1, 1); }), static_cast<int>(ErrorCode::Infeasible));
  EXPECT_EQ(code_of([&] { gen_planted(make_false(), p, 1, 0, 1); }), static_cast<int>(ErrorCode::Infeasible));
  EXPECT_EQ(gen_planted(make_true(), p, 3, 0, 1).size(), 3u);
  EXPECT_EQ(code_of([&] { gen_planted(parse_formula("x >= ?c"), p, 1, 1, 1); }), static_cast<int>(ErrorCode::Usage));
}

TEST(Planted, BothClassesAndSelfConsistency) {
  support::Rng rng(2);
  auto g = support::random_graph(rng, 8, 0.5);
  auto p = two_bin(g, 3);
  auto sep = parse_formula("F (x >= 1.5)");
  GenerationStats stats;
  auto s = gen_planted(sep, p, 4, 4, 7, {}, &stats);
  ASSERT_EQ(s.size(), 8u);
  for (std::size_t i = 0; i < 8; ++i) EXPECT_EQ(*s.items[i].label, i < 4 ? 1 : -1);
  EXPECT_LE(misclassification_rate(s, sep), 0.05);
  EXPECT_EQ(stats.accepted, 8u);
  auto again = gen_planted(sep, p, 4, 4, 7);
  EXPECT_EQ(again.items[5].x(3, 2), s.items[5].x(3, 2));
}
