#include <gtest/gtest.h>

#include "oracle.hpp"
#include "qcsp/gadgets.hpp"
#include "qcsp/harness.hpp"
#include "qcsp/parser.hpp"
#include "qcsp/random.hpp"

using namespace qcsp;

TEST(Complement, Constraints) {
  const auto c = complement_constraint(presets::or2());
  EXPECT_EQ(c->bits(), "1110");
  EXPECT_EQ(c->name(), "OR2_c");
  const auto x = presets::xor2();
  EXPECT_EQ(complement_constraint(x), x);
  for (const auto& f : all_functions(3, [](const Constraint& x) { return x.arity() == 3; })) {
    const auto back = complement_constraint(complement_constraint(f));
    ASSERT_TRUE(back->same_function(*f));
    ASSERT_EQ(back->name(), f->name());
  }
}

TEST(Complement, Expressions) {
  const auto e = parse_expression("A x : EQ2(x, 0);");
  const auto c = complement_expression(e);
  EXPECT_EQ(render_expression(c), "A x : EQ2(x, 1);");
  EXPECT_FALSE(eval(e));
  EXPECT_FALSE(eval(c));

  const auto o = parse_expression("E x : OR2(x, 0);");
  const auto oc = complement_expression(o);
  EXPECT_EQ(render_expression(oc), "E x : OR2_c(x, 1);");
  EXPECT_TRUE(eval(oc));
  EXPECT_EQ(complement_expression(oc), o);
}

TEST(Complement, PreservesTruthOnRandomExpressions) {
  Rng rng(41);
  const auto pool = all_functions(3, [](const Constraint&) { return true; });
  for (int i = 0; i < 500; ++i) {
    ExpressionParams p;
    p.max_vars = 12;
    p.max_apps = 15;
    p.constant_prob = 0.2;
    const auto e = random_expression(rng, sample_constraints(rng, pool, 3), p);
    ASSERT_EQ(oracle::truth(complement_expression(e)), oracle::truth(e)) << render_expression(e);
  }
}

// For a complementive set, swapping every constant keeps the truth value.
TEST(Complement, SwappingConstantsOverComplementiveSets) {
  Rng rng(42);
  const auto pool = all_functions(3, [](const Constraint& c) { return is_complementive(c); });
  for (int i = 0; i < 300; ++i) {
    ExpressionParams p;
    p.max_vars = 10;
    p.constant_prob = 0.3;
    const auto e = random_expression(rng, sample_constraints(rng, pool, 3), p);
    auto swapped = map_arguments(e.matrix(), [](const Argument& a) {
      return a.is_constant() ? cst(!a.constant_value()) : a;
    });
    ASSERT_EQ(oracle::truth(QuantifiedExpression(e.prefix(), swapped)), oracle::truth(e));
  }
}

TEST(Substitute, ReplacesEveryApplicationWithFreshCopies) {
  const auto impl = find_implementation({presets::oit()}, presets::or2()).implementation;
  ASSERT_TRUE(impl);
  const auto e = parse_expression("A a ; E b, c : OR2(a, b), OR2(b, c), XOR2(a, c);");
  const auto s = substitute_implementation(e, *impl);
  EXPECT_EQ(prefix_shape(s), prefix_shape(e));
  EXPECT_EQ(s.variable_count(), e.variable_count() + 2 * impl->aux_vars.size());
  for (const auto& app : s.matrix()) EXPECT_NE(app.constraint()->name(), "OR2");
  EXPECT_EQ(eval(s), eval(e));
}

TEST(Substitute, IdentityLeavesTheExpressionAlone) {
  const auto impl = find_implementation({presets::or2()}, presets::or2(), {0, 1}).implementation;
  const auto e = parse_expression("A a ; E b : OR2(a, b), OR2(b, 1);");
  EXPECT_EQ(substitute_implementation(e, *impl), e);
}

TEST(Substitute, NeedsAnExistentialInnermostBlock) {
  const auto impl = find_implementation({presets::oit()}, presets::or2()).implementation;
  EXPECT_THROW(substitute_implementation(parse_expression("E a ; A b : OR2(a, b);"), *impl), ShapeMismatch);
  Implementation bad{presets::and2(), {"x", "y"}, {}, {ConstraintApplication(presets::or2(), {var("x"), var("y")})}};
  EXPECT_THROW(substitute_implementation(parse_expression("E a, b : AND2(a, b);"), bad), InvalidArgument);
}

TEST(Substitute, RandomExpressionsKeepTheirValue) {
  Rng rng(43);
  std::vector<Implementation> impls;
  for (const auto& t : {presets::or2(), presets::xor2(), presets::nand2(), presets::imp2()}) {
    impls.push_back(*find_implementation({presets::oit()}, t).implementation);
  }
  const std::vector<ConstraintRef> pool = {presets::or2(), presets::xor2(), presets::nand2(), presets::imp2(),
                                           presets::oit()};
  for (int i = 0; i < 200; ++i) {
    ExpressionParams p;
    p.min_vars = 2;
    p.max_vars = 6;
    p.max_apps = 4;
    p.first = Quantifier::Exists;
    p.blocks = uniform_int(rng, 1, 2) * 2 - 1;
    if (p.blocks > 1) p.min_vars = 3;
    const auto e = random_expression(rng, pool, p);
    auto s = e;
    for (const auto& impl : impls) s = substitute_implementation(s, impl);
    EvalBudget budget;
    budget.max_variables = 40;
    ASSERT_EQ(eval(s, budget), oracle::truth(e)) << render_expression(e);
  }
}

TEST(EliminateUnary, Examples) {
  const auto r = eliminate_unary(parse_expression("E x, y : ID1(x), OR2(x, y);"));
  ASSERT_FALSE(r.trivially_false());
  EXPECT_EQ(render_expression(*r.expression), "E y : OR2(1, y);");

  EXPECT_TRUE(eliminate_unary(parse_expression("E x : ID1(x), NOT1(x);")).trivially_false());
  EXPECT_TRUE(eliminate_unary(parse_expression("A x ; E y : ID1(x), OR2(x, y);")).trivially_false());
  EXPECT_TRUE(eliminate_unary(parse_expression("E x : ID1(0), OR2(x, x);")).trivially_false());
  EXPECT_THROW(eliminate_unary(parse_document("constraint K arity 1 := table 11;\nexpr X := E x : K(x);")
                                   .expressions[0]
                                   .expression),
               InvalidArgument);
}

TEST(EliminateUnary, PreservesTruth) {
  Rng rng(44);
  const std::vector<ConstraintRef> pool = {presets::id1(), presets::not1(), presets::oit(), presets::or2()};
  for (int i = 0; i < 400; ++i) {
    ExpressionParams p;
    p.max_vars = 8;
    p.constant_prob = 0.1;
    const auto e = random_expression(rng, pool, p);
    const auto r = eliminate_unary(e);
    const bool truth = oracle::truth(e);
    if (r.trivially_false()) {
      ASSERT_FALSE(truth) << render_expression(e);
    } else {
      ASSERT_EQ(oracle::truth(*r.expression), truth) << render_expression(e);
      for (const auto& app : r.expression->matrix()) ASSERT_NE(app.constraint()->arity(), 1);
    }
  }
}

TEST(Gadgets, ImplicationPairPinsFalseAndTrue) {
  const auto imp = presets::imp2();
  for (int f = 0; f < 2; ++f) {
    for (int t = 0; t < 2; ++t) {
      const QuantifiedExpression e({{Quantifier::Forall, {"y"}}},
                                   {ConstraintApplication(imp, {cst(f), var("y")}),
                                    ConstraintApplication(imp, {var("y"), cst(t)})});
      EXPECT_EQ(oracle::truth(e), !f && t) << f << t;
    }
  }
}

TEST(Gadgets, SymOrCofactors) {
  const auto s = presets::symor1();
  for (std::uint32_t yz = 0; yz < 4; ++yz) {
    const bool y = yz & 2U, z = yz & 1U;
    EXPECT_EQ(s->value(yz), !y || z);
    EXPECT_EQ(s->value(4 | yz), !z || y);
  }
}

TEST(Gadgets, HatValues) {
  const auto or2 = presets::or2();
  const auto h = build_hat(or2, 0b11);
  EXPECT_EQ(render_application(h.apply(var("x"), var("y"))), "OR2(y, y)");
  EXPECT_FALSE(h.value(false, false));
  EXPECT_TRUE(h.value(false, true));
  EXPECT_THROW(build_hat(or2, 0b00), InvalidArgument);

  for (const auto& c : all_functions(3, [](const Constraint&) { return true; })) {
    if (c->is_constant_false()) continue;
    const int k = c->arity();
    for (std::uint32_t s : c->satisfying_rows()) {
      const auto hat = build_hat(c, s);
      ASSERT_TRUE(hat.value(false, true));
      if (!is_zero_valid(*c)) {
        ASSERT_FALSE(hat.value(false, false));
      }
      if (!is_one_valid(*c)) {
        ASSERT_FALSE(hat.value(true, true));
      }
      if (!c->value(complement_row(s, k))) {
        ASSERT_FALSE(hat.value(true, false));
      }
    }
  }
}

TEST(RemoveConstants, ReductionCases) {
  for (const auto& [rc, cs] : reduction_case_sets()) EXPECT_EQ(reduction_case(cs), rc) << to_string(rc);
  EXPECT_EQ(reduction_case({presets::oit(), make_constraint("K", 2, "1111")}), ReductionCase::NeitherValidNotComp);
  EXPECT_THROW(reduction_case({presets::nand2()}), NotApplicable);
}

TEST(RemoveConstants, ZeroValidPi2) {
  const std::vector<ConstraintRef> cs = {presets::get("OR3_1n"), presets::nand2()};
  const auto e = parse_expression("A a ; E b, c : OR3_1n(a, b, 1), NAND2(b, c), OR3_1n(c, 0, a);");
  const auto r = remove_constants(e, cs, 2);
  ASSERT_EQ(r.case_used, ReductionCase::ZeroValidNotComp);
  const auto& out = *r.expression;
  EXPECT_FALSE(out.has_constants());
  EXPECT_EQ(prefix_shape(out), prefix_shape(e));
  EXPECT_EQ(out.prefix()[0].vars, (std::vector<std::string>{"a", "y", "z"}));
  EXPECT_EQ(out.prefix()[1].vars[0], "f");
  EXPECT_EQ(out.prefix()[1].vars[1], "t");
  EXPECT_EQ(oracle::truth(out), oracle::truth(e));
  ASSERT_EQ(r.implementations_used.size(), 1U);
  EXPECT_EQ(r.implementations_used[0].target->name(), "IMP2");
}

TEST(RemoveConstants, ComplementiveNeitherValidEvenLevel) {
  const std::vector<ConstraintRef> cs = {presets::eq2(), presets::xor2()};
  const auto e = parse_expression("A x : EQ2(x, 0);");
  const auto r = remove_constants_with_case(e, cs, 2, ReductionCase::NeitherValidComp);
  ASSERT_TRUE(r.expression);
  EXPECT_EQ(render_expression(*r.expression), "A b, x ; E b_prime : EQ2(x, b), XOR2(b, b_prime);");
  EXPECT_FALSE(eval(*r.expression));
  EXPECT_FALSE(eval(e));
  EXPECT_THROW(remove_constants(e, cs, 2), NotApplicable);
}

TEST(RemoveConstants, Errors) {
  const std::vector<ConstraintRef> a = {presets::get("OR3_1n"), presets::nand2()};
  EXPECT_THROW(remove_constants(parse_expression("E a : NAND2(a, 1);"), a, 1), ShapeMismatch);
  EXPECT_THROW(remove_constants(parse_expression("A a ; E b : NAND2(a, b);"), a, 3), ShapeMismatch);
  EXPECT_THROW(remove_constants(parse_expression("E a : OR2(a, 1);"), a, 3), InvalidArgument);
  EXPECT_THROW(remove_constants(parse_expression("E a : NAND2(a, 1);"), a, 0), InvalidArgument);
}

TEST(RemoveConstants, LevelOneForTheNeitherValidCases) {
  const auto oit = presets::oit();
  const auto e = parse_expression("E a, b : OIT(a, b, 1), OIT(a, 0, b);");
  const auto r = remove_constants(e, {oit}, 1);
  ASSERT_TRUE(r.expression);
  EXPECT_EQ(prefix_shape(*r.expression), (PrefixShape{Polarity::Sigma, 1}));
  EXPECT_EQ(eval(*r.expression), eval(e));
}

TEST(RemoveConstants, ConstantFreeInputIsOnlyPadded) {
  const auto e = parse_expression("E a, b, c : OIT(a, b, c);");
  const auto r = remove_constants(e, {presets::oit()}, 3);
  ASSERT_TRUE(r.expression);
  EXPECT_EQ(prefix_shape(*r.expression), nominal_shape(3));
  EXPECT_EQ(r.expression->matrix(), e.matrix());
}

TEST(RemoveConstants, SharedCacheIsReused) {
  RemovalOptions opt;
  opt.cache = std::make_shared<ImplementationCache>();
  const std::vector<ConstraintRef> cs = {make_constraint("NAE3", 3, "01111110")};
  const auto e1 = parse_expression("E a ; A b ; E c : NAE3(a, b, 1);", [&] {
    SourceDocument d;
    d.constraints = cs;
    return d;
  }());
  const auto r1 = remove_constants(e1, cs, 3, opt);
  const auto r2 = remove_constants(e1, cs, 3, opt);
  EXPECT_EQ(*r1.expression, *r2.expression);
  EXPECT_EQ(eval(*r1.expression), eval(e1));
}

TEST(RemoveConstants, DifferentialPerCase) {
  HarnessConfig cfg;
  cfg.seed = 99;
  cfg.instances = 40;
  const auto rep = verify_reductions(cfg);
  EXPECT_TRUE(rep.ok()) << (rep.failures.empty() ? "" : rep.failures.front());
  EXPECT_GT(rep.passed, 150U);
}
