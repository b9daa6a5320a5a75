#include <gtest/gtest.h>

#include <algorithm>

#include "oracle.hpp"
#include "qcsp/evaluator.hpp"
#include "qcsp/parser.hpp"
#include "qcsp/random.hpp"

using namespace qcsp;

TEST(Eval, SmallExamples) {
  EXPECT_TRUE(eval(parse_expression("E x ; A y : OR2(x, y);")));
  EXPECT_FALSE(eval(parse_expression("A x : EQ2(x, 0);")));
  EXPECT_TRUE(eval(parse_expression("A x ; E f, t : EQ2(x, f), XOR2(f, t);")));
  EXPECT_TRUE(eval(parse_expression(":;")));
  EXPECT_FALSE(eval(parse_expression(": OR2(0, 0);")));
  EXPECT_TRUE(eval(parse_expression("A x :;")));
}

TEST(Eval, BudgetIsAnErrorNotAnAnswer) {
  std::string text = "E";
  for (int i = 0; i < 30; ++i) text += (i ? ", x" : " x") + std::to_string(i);
  text += " : OIT(x0, x1, x2);";
  const auto e = parse_expression(text);
  EXPECT_THROW(eval(e), BudgetExceeded);
  EvalBudget big;
  big.max_variables = 30;
  EXPECT_TRUE(eval(e, big));
}

TEST(Eval, NodeLimit) {
  const auto e = parse_expression("A a, b, c, d ; E x, y : OIT(a, x, y), OIT(b, c, d);");
  EvalBudget tight;
  tight.node_limit = 3;
  EXPECT_THROW(eval(e, tight), BudgetExceeded);
}

TEST(QsatMember, PolarityFollowsLevel) {
  EXPECT_TRUE(qsat_i_member(parse_expression("E x : ID1(x);"), 1));
  EXPECT_FALSE(qsat_i_member(parse_expression("A x ; E y : XOR2(x, y);"), 2));
  EXPECT_TRUE(qsat_i_member(parse_expression("A x : NOT1(x);"), 2));
  EXPECT_THROW(qsat_i_member(parse_expression("A x : NOT1(x);"), 1), ShapeMismatch);
  EXPECT_THROW(qsat_i_member(parse_expression("E x ; A y ; E z : OR3(x, y, z);"), 2), ShapeMismatch);
  EXPECT_THROW(qsat_i_member(parse_expression("E x : ID1(x);"), 0), InvalidArgument);
}

TEST(Eval, AgreesWithReferenceOnRandomExpressions) {
  Rng rng(11);
  const auto pool = presets::all();
  for (int i = 0; i < 500; ++i) {
    ExpressionParams p;
    p.max_vars = 12;
    p.max_apps = 12;
    p.constant_prob = 0.15;
    const auto e = random_expression(rng, pool, p);
    ASSERT_EQ(eval(e), oracle::truth(e)) << render_expression(e);
  }
}

TEST(Eval, PermutingInsideABlockKeepsTheValue) {
  Rng rng(12);
  const auto pool = presets::all();
  for (int i = 0; i < 500; ++i) {
    ExpressionParams p;
    p.max_vars = 12;
    p.max_apps = 12;
    p.constant_prob = 0.1;
    const auto e = random_expression(rng, pool, p);
    auto prefix = e.prefix();
    for (auto& b : prefix) std::shuffle(b.vars.begin(), b.vars.end(), rng);
    ASSERT_EQ(eval(QuantifiedExpression(prefix, e.matrix())), eval(e)) << render_expression(e);
  }
}

TEST(Eval, ThreadedMatchesSequential) {
  Rng rng(13);
  const auto pool = presets::all();
  EvalBudget par;
  par.threads = 4;
  for (int i = 0; i < 200; ++i) {
    ExpressionParams p;
    p.min_vars = 4;
    p.max_vars = 14;
    p.max_apps = 14;
    const auto e = random_expression(rng, pool, p);
    ASSERT_EQ(eval(e, par), eval(e)) << render_expression(e);
  }
}

TEST(Eval, RaisingTheBudgetNeverChangesAnAnswer) {
  Rng rng(14);
  const auto pool = presets::all();
  for (int i = 0; i < 200; ++i) {
    ExpressionParams p;
    p.max_vars = 14;
    const auto e = random_expression(rng, pool, p);
    EvalBudget small;
    small.max_variables = 8;
    EvalBudget large;
    large.max_variables = 20;
    try {
      const bool v = eval(e, small);
      ASSERT_EQ(eval(e, large), v);
    } catch (const BudgetExceeded&) {
      ASSERT_GT(e.variable_count(), 8U);
    }
  }
}
