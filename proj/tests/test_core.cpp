#include <gtest/gtest.h>

#include "qcsp/constraint.hpp"
#include "qcsp/expression.hpp"
#include "qcsp/presets.hpp"

using namespace qcsp;

namespace {

ConstraintApplication app(const ConstraintRef& c, std::vector<Argument> args) {
  return ConstraintApplication(c, std::move(args));
}

}  // namespace

TEST(Constraint, TablesFollowFirstArgumentMostSignificant) {
  const auto or3 = make_constraint("OR3", 3, "01111111");
  EXPECT_FALSE(or3->value(0));
  for (std::uint32_t r = 1; r < 8; ++r) EXPECT_TRUE(or3->value(r));

  const auto oit = make_constraint("OIT", 3, "01101000");
  EXPECT_EQ(oit->satisfying_rows(), (std::vector<std::uint32_t>{0b001, 0b010, 0b100}));

  const auto xor2 = make_constraint("XOR2", 2, "0110");
  EXPECT_EQ(xor2->bits(), "0110");
  EXPECT_EQ(xor2->count(), 2U);
}

TEST(Constraint, RejectsBadShapes) {
  EXPECT_THROW(make_constraint("X", 2, "011"), InvalidArgument);
  EXPECT_THROW(make_constraint("X", 0, "0"), InvalidArgument);
  EXPECT_THROW(make_constraint("X", 1, "0a"), InvalidArgument);
  EXPECT_THROW(make_constraint("X", kMaxArity + 1, ""), InvalidArgument);
  EXPECT_NO_THROW(make_constraint("W", kMaxArity, std::string(std::size_t{1} << kMaxArity, '1')));
}

TEST(Constraint, ConstantFunctions) {
  const auto t = make_constraint("T", 2, "1111");
  const auto f = make_constraint("F", 2, "0000");
  EXPECT_TRUE(t->is_constant_true());
  EXPECT_TRUE(f->is_constant_false());
  EXPECT_FALSE(presets::or2()->is_constant_true());
}

TEST(Application, EvaluatesRowsWithConstantsAndRepeats) {
  const Assignment a{{"x", false}, {"y", true}};
  EXPECT_TRUE(evaluate_application(app(presets::or3(), {var("x"), var("y"), cst(false)}), a));

  const Assignment b{{"x", true}, {"y", false}};
  EXPECT_FALSE(evaluate_application(app(presets::oit(), {var("x"), var("x"), var("y")}), b));

  const Assignment c{{"x", true}};
  EXPECT_FALSE(evaluate_application(app(presets::xor2(), {var("x"), cst(true)}), c));
}

TEST(Application, UnboundVariableIsAnError) {
  EXPECT_THROW(evaluate_application(app(presets::or2(), {var("x"), var("z")}), Assignment{{"x", true}}),
               UnboundVariable);
}

TEST(Application, ArityMismatchIsRejected) {
  EXPECT_THROW(app(presets::or2(), {var("x")}), InvalidArgument);
}

// Exhaustive for arity <= 4: the application of C to distinct variables reads
// row r exactly when the assignment spells r with the first argument high.
TEST(Application, RowOrderRoundTrip) {
  for (int k = 1; k <= 4; ++k) {
    const std::uint32_t rows = 1U << k;
    for (std::uint32_t t = 0; t < (1U << rows); t += (k == 4 ? 97 : 1)) {
      std::string bits(rows, '0');
      for (std::uint32_t r = 0; r < rows; ++r) bits[r] = ((t >> r) & 1U) ? '1' : '0';
      const auto c = make_constraint("C", k, bits);
      std::vector<Argument> args;
      for (int i = 0; i < k; ++i) args.push_back(var("v" + std::to_string(i)));
      const auto a = app(c, args);
      for (std::uint32_t r = 0; r < rows; ++r) {
        Assignment asg;
        for (int i = 0; i < k; ++i) asg["v" + std::to_string(i)] = ((r >> (k - 1 - i)) & 1U) != 0;
        ASSERT_EQ(evaluate_application(a, asg), c->value(r)) << bits << " row " << r;
      }
    }
  }
}

TEST(Expression, PrefixShapes) {
  const QuantifiedExpression sigma3({{Quantifier::Exists, {"x"}}, {Quantifier::Forall, {"y"}}, {Quantifier::Exists, {"z"}}},
                                    {app(presets::or3(), {var("x"), var("y"), var("z")})});
  EXPECT_EQ(prefix_shape(sigma3), (PrefixShape{Polarity::Sigma, 3}));

  const QuantifiedExpression pi2({{Quantifier::Forall, {"x1", "x2"}}, {Quantifier::Exists, {"y"}}},
                                 {app(presets::or3(), {var("x1"), var("x2"), var("y")})});
  EXPECT_EQ(prefix_shape(pi2), (PrefixShape{Polarity::Pi, 2}));

  const QuantifiedExpression empty({}, {app(presets::or2(), {cst(true), cst(false)})});
  EXPECT_EQ(prefix_shape(empty), (PrefixShape{Polarity::Sigma, 0}));
}

TEST(Expression, WellFormednessIsCheckedAtConstruction) {
  EXPECT_THROW(QuantifiedExpression({{Quantifier::Exists, {"x"}}}, {app(presets::or2(), {var("x"), var("y")})}),
               MalformedExpression);
  EXPECT_THROW(QuantifiedExpression({{Quantifier::Exists, {"x"}}, {Quantifier::Exists, {"y"}}}, {}),
               MalformedExpression);
  EXPECT_THROW(QuantifiedExpression({{Quantifier::Exists, {"x"}}, {Quantifier::Forall, {"x"}}}, {}),
               MalformedExpression);
  EXPECT_THROW(QuantifiedExpression({{Quantifier::Exists, {}}}, {}), MalformedExpression);
}

TEST(Expression, NormalizedMergesAndDropsBlocks) {
  const auto e = QuantifiedExpression::normalized(
      {{Quantifier::Exists, {"a"}}, {Quantifier::Forall, {}}, {Quantifier::Exists, {"b"}}, {Quantifier::Forall, {"c"}}},
      {});
  ASSERT_EQ(e.prefix().size(), 2U);
  EXPECT_EQ(e.prefix()[0].vars, (std::vector<std::string>{"a", "b"}));
}

TEST(Expression, FitsLevel) {
  EXPECT_TRUE(fits_level({Polarity::Sigma, 2}, 3));
  EXPECT_TRUE(fits_level({Polarity::Pi, 1}, 2));
  EXPECT_FALSE(fits_level({Polarity::Pi, 2}, 3));
  EXPECT_FALSE(fits_level({Polarity::Sigma, 3}, 1));
  EXPECT_TRUE(fits_level({Polarity::Sigma, 0}, 4));
}

TEST(Presets, TablesAndSetD) {
  EXPECT_EQ(presets::symor1()->bits(), "11011011");
  EXPECT_EQ(presets::get("OR3_1n")->bits(), "10111111");
  EXPECT_EQ(presets::get("OR3_3n")->bits(), "11111110");
  EXPECT_EQ(presets::cnf3_set().size(), 4U);
  EXPECT_EQ(presets::get("NOPE"), nullptr);
}
