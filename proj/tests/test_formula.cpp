#include <gtest/gtest.h>

#include "gtl/error.hpp"
#include "gtl/formula.hpp"
#include "support.hpp"

using namespace gtl;

TEST(Parser, Atom) {
  auto f = parse_formula("x >= ?b");
  ASSERT_EQ(f->op, Op::Atom);
  EXPECT_EQ(f->cmp, Cmp::Ge);
  EXPECT_EQ(f->threshold.param, std::optional<std::string>("b"));
}

TEST(Parser, ImplicationShape) {
  auto f = parse_formula("G ( (x >= 181.1) -> G[<=6] E 8 via (y <= 2) : (x <= 198.0) )");
  ASSERT_EQ(f->op, Op::Always);
  EXPECT_TRUE(f->bound.unbounded());
  const auto& imp = f->a;
  ASSERT_EQ(imp->op, Op::Implies);
  EXPECT_EQ(imp->a->op, Op::Atom);
  EXPECT_DOUBLE_EQ(imp->a->threshold.value, 181.1);
  const auto& inner = imp->b;
  ASSERT_EQ(inner->op, Op::Always);
  EXPECT_EQ(inner->bound.upper->value, 6);
  EXPECT_FALSE(inner->bound.lower);
  ASSERT_EQ(inner->a->op, Op::Exists);
  EXPECT_EQ(inner->a->count.value, 8);
  ASSERT_EQ(inner->a->chain.size(), 1u);
  EXPECT_EQ(inner->a->chain[0].cmp, Cmp::Le);
  EXPECT_DOUBLE_EQ(inner->a->chain[0].threshold.value, 2);
  EXPECT_EQ(inner->a->a->cmp, Cmp::Le);
  EXPECT_DOUBLE_EQ(inner->a->a->threshold.value, 198.0);
}

TEST(Parser, TypeTwoShape) {
  auto f = parse_formula("E 4 via (y <= 2) : G[>=3][<=8] (x >= 178.7)");
  ASSERT_EQ(f->op, Op::Exists);
  EXPECT_EQ(f->count.value, 4);
  ASSERT_EQ(f->a->op, Op::Always);
  EXPECT_EQ(f->a->bound.lower->value, 3);
  EXPECT_EQ(f->a->bound.upper->value, 8);
  EXPECT_DOUBLE_EQ(f->a->a->threshold.value, 178.7);
}

TEST(Parser, ErrorsCarryPosition) {
  try {
    parse_formula("G (x >= 1) &\n  F[<= ] (x <= 2)");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.code(), ErrorCode::Parse);
    EXPECT_EQ(e.line(), 2);
    EXPECT_EQ(e.column(), 8);
    EXPECT_FALSE(e.expected().empty());
  }
  EXPECT_THROW(parse_formula(""), ParseError);
  EXPECT_THROW(parse_formula("x >= "), ParseError);
  EXPECT_THROW(parse_formula("(x >= 1"), ParseError);
  EXPECT_THROW(parse_formula("x >= 1 )"), ParseError);
  EXPECT_THROW(parse_formula("E 1 : (x >= 1)"), ParseError);
  EXPECT_THROW(parse_formula("x ~ 1"), ParseError);
}

TEST(Parser, RoundTripProperty) {
  support::Rng rng(5);
  support::FormulaGen gen{rng};
  for (int i = 0; i < 2000; ++i) {
    auto f = gen.any(rng.uniform_int(0, 4));
    auto text = to_string(f);
    auto back = parse_formula(text);
    ASSERT_TRUE(structurally_equal(f, back)) << text;
    EXPECT_EQ(to_string(back), text);
  }
}

TEST(Parser, ParametricRoundTrip) {
  for (const char* text : {"F[<=?i] (x >= ?c)", "E ?N via (y <= ?d) : G[>=?i1][<=?i2] (x >= ?c)",
                           "G ((x >= ?a) -> G[<=?i] E ?N via (y <= ?d) : (x <= ?b))",
                           "((x >= 1) U[<=3] (x <= -2.5e-3))", "!(TRUE | FALSE)"}) {
    auto f = parse_formula(text);
    EXPECT_TRUE(structurally_equal(f, parse_formula(to_string(f)))) << text;
  }
}

TEST(Parameters, OrderAndKinds) {
  auto ps = parameters(parse_formula("E ?N via (y <= ?d) : G[>=?i1][<=?i2] (x >= ?c)"));
  std::vector<std::string> names;
  for (const auto& p : ps) names.push_back(p.name);
  EXPECT_EQ(names, (std::vector<std::string>{"N", "d", "i1", "i2", "c"}));
  EXPECT_TRUE(ps[0].integer);
  EXPECT_FALSE(ps[1].integer);
  EXPECT_TRUE(ps[2].integer);
  EXPECT_FALSE(ps[4].integer);
  EXPECT_THROW(parse_formula("F[<=?c] (x >= ?c)"), Error);
}

TEST(Instantiate, Examples) {
  auto f = parse_formula("E ?N via (y <= ?a) : (x >= ?b)");
  auto g = instantiate(f, {{"N", 2}, {"a", 1}, {"b", 1}});
  EXPECT_TRUE(structurally_equal(g, parse_formula("E 2 via (y <= 1) : (x >= 1)")));
  auto plain = parse_formula("G (x <= 3)");
  EXPECT_TRUE(structurally_equal(instantiate(plain, {}), plain));
  auto h = instantiate(parse_formula("F[<= ?i] (x >= ?c)"), {{"i", 1}, {"c", 0.5}});
  EXPECT_TRUE(structurally_equal(h, parse_formula("F[<=1] (x >= 0.5)")));
}

TEST(Instantiate, Errors) {
  auto f = parse_formula("E ?N via (y <= ?a) : F[<=?i] (x >= ?b)");
  auto code = [&](const Valuation& v) {
    try {
      instantiate(f, v);
    } catch (const Error& e) {
      return static_cast<int>(e.code());
    }
    return 0;
  };
  EXPECT_EQ(code({{"N", 2}, {"a", 1}, {"i", 1}}), static_cast<int>(ErrorCode::Input));
  EXPECT_EQ(code({{"N", 2.5}, {"a", 1}, {"i", 1}, {"b", 0}}), static_cast<int>(ErrorCode::Input));
  EXPECT_EQ(code({{"N", 0}, {"a", 1}, {"i", 1}, {"b", 0}}), static_cast<int>(ErrorCode::Range));
  EXPECT_EQ(code({{"N", 1}, {"a", 1}, {"i", -1}, {"b", 0}}), static_cast<int>(ErrorCode::Range));
  EXPECT_EQ(code({{"N", 1}, {"a", 1}, {"i", 2}, {"b", 0}}), 0);
}

TEST(Polarity, Examples) {
  EXPECT_EQ(polarity(parse_formula("x <= ?p"), "p"), Polarity::Positive);
  EXPECT_EQ(polarity(parse_formula("!(x <= ?p)"), "p"), Polarity::Negative);
  EXPECT_EQ(polarity(parse_formula("G[>=?p] (x >= 3)"), "p"), Polarity::Positive);
  EXPECT_EQ(polarity(parse_formula("F[<=?p] (x >= 3)"), "p"), Polarity::Positive);
  EXPECT_EQ(polarity(parse_formula("F[>=?p] (x >= 3)"), "p"), Polarity::Negative);
  EXPECT_EQ(polarity(parse_formula("G[<=?p] (x >= 3)"), "p"), Polarity::Negative);
  EXPECT_EQ(polarity(parse_formula("E ?N via (y <= ?d) : (x >= 1)"), "N"), Polarity::Negative);
  EXPECT_EQ(polarity(parse_formula("E ?N via (y <= ?d) : (x >= 1)"), "d"), Polarity::Positive);
  EXPECT_EQ(polarity(parse_formula("(x <= 1) U[<=?p] (x >= 2)"), "p"), Polarity::Mixed);
  EXPECT_THROW(parse_formula("(x <= ?p) & (x >= ?p)"), ParseError);
  EXPECT_EQ(polarity(parse_formula("x <= 1"), "p"), Polarity::Undefined);
  EXPECT_EQ(polarity(parse_formula("G ((x >= ?a) -> F (x <= ?b))"), "a"), Polarity::Positive);
  EXPECT_EQ(polarity(parse_formula("G ((x >= ?a) -> F (x <= ?b))"), "b"), Polarity::Positive);
}

TEST(Polarity, MonotoneOnRandomTrajectories) {
  // Raising a positive-polarity parameter never turns a satisfied formula
  // into a violated one.
  support::Rng rng(17);
  const std::vector<std::string> shapes{"F[<=?p] (x >= 2)", "G[>=?p] (x >= 2)", "E ?p via (y <= 2) : (x >= 1)",
                                        "G ((x >= ?p) -> F (x <= 1))",
                                        "!F[>=?p] (x <= 0)"};
  for (const auto& text : shapes) {
    auto f = parse_formula(text);
    auto pol = polarity(f, "p");
    ASSERT_TRUE(pol == Polarity::Positive || pol == Polarity::Negative) << text;
    bool integer = parameters(f)[0].integer;
    for (int trial = 0; trial < 200; ++trial) {
      auto g = support::random_graph(rng, 4, 0.6);
      auto t = support::random_trajectory(rng, g, 3);
      double lo = integer ? rng.uniform_int(1, 3) : rng.uniform_int(0, 3);
      double hi = lo + (integer ? rng.uniform_int(0, 2) : rng.uniform_int(0, 2));
      auto easy = instantiate(f, {{"p", pol == Polarity::Positive ? hi : lo}});
      auto hard = instantiate(f, {{"p", pol == Polarity::Positive ? lo : hi}});
      for (int v = 0; v < 4; ++v)
        if (support::naive_sat(t, hard, v, 1)) {
          EXPECT_TRUE(support::naive_sat(t, easy, v, 1)) << text;
        }
    }
  }
}

TEST(Size, Examples) {
  EXPECT_EQ(formula_size(parse_formula("E 2 via (y <= 1) : (x >= 1)")), 0);
  EXPECT_EQ(formula_size(parse_formula("G ((x >= 181.1) -> G[<=6] E 8 via (y <= 2) : (x <= 198)) & "
                                       "G ((x >= 1) -> F (x <= 2))")),
            3);
  EXPECT_EQ(formula_size(parse_formula("G[>=1][<=2] (x >= 1)")), 0);
}

TEST(Subtype, Examples) {
  EXPECT_EQ(classify_subtype(parse_formula("G ((x >= 1) -> F[<=2] E 2 via (y <= 1) : (x <= 0))")),
            (Subtype{true, false, false, true}));
  EXPECT_EQ(classify_subtype(parse_formula("E 2 via (y <= 1) : G[>=1][<=2] (x >= 1)")),
            (Subtype{false, true, false, true}));
  EXPECT_EQ(classify_subtype(parse_formula("x >= 1")), (Subtype{true, false, true, true}));
  EXPECT_EQ(classify_subtype(parse_formula("F (x >= 1)")), (Subtype{true, false, true, false}));
  EXPECT_EQ(classify_subtype(parse_formula("G (x >= 1)")), (Subtype{true, false, false, true}));
  auto nested = classify_subtype(parse_formula("E 1 via (y <= 1) : F E 1 via (y <= 1) : (x >= 1)"));
  EXPECT_FALSE(nested.typeI);
  EXPECT_FALSE(nested.typeII);
}
