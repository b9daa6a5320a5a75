#include <gtest/gtest.h>

#include "qcsp/gadgets.hpp"
#include "qcsp/impl_search.hpp"
#include "qcsp/presets.hpp"
#include "qcsp/random.hpp"

using namespace qcsp;

TEST(CheckImplementation, HatsPinFalseAndTrue) {
  const auto oit = presets::oit();
  const auto a = build_hat(oit, 0b001);
  Implementation impl{presets::andn2(), {"f", "t"}, {}, {}};
  impl.apps.push_back(a.apply(var("f"), var("t")));
  EXPECT_TRUE(check_implementation(impl));
}

TEST(CheckImplementation, VacuousAndWrong) {
  EXPECT_TRUE(check_implementation({make_constraint("T", 2, "1111"), {"x", "y"}, {}, {}}));
  Implementation wrong{presets::and2(), {"x", "y"}, {}, {ConstraintApplication(presets::or2(), {var("x"), var("y")})}};
  EXPECT_FALSE(check_implementation(wrong));
}

TEST(CheckImplementation, StructuralProblems) {
  const auto or2 = presets::or2();
  EXPECT_FALSE(check_implementation({or2, {"x"}, {}, {}}));
  EXPECT_FALSE(check_implementation({or2, {"x", "x"}, {}, {}}));
  EXPECT_FALSE(check_implementation({or2, {"x", "y"}, {}, {ConstraintApplication(or2, {var("x"), var("q")})}}));
  EXPECT_FALSE(check_implementation({nullptr, {}, {}, {}}));
}

TEST(FindImplementation, Identity) {
  const auto r = find_implementation({presets::or2()}, presets::or2(), {0, 1});
  ASSERT_TRUE(r.found());
  EXPECT_TRUE(r.implementation->aux_vars.empty());
  ASSERT_EQ(r.implementation->apps.size(), 1U);
  EXPECT_EQ(to_string(*r.implementation), "OR2(x1, x2) := E : OR2(x1, x2);");
}

TEST(FindImplementation, SeparatedByAProperty) {
  const auto r = find_implementation({presets::xor2()}, presets::and2(), {2, 4});
  EXPECT_FALSE(r.found());
  EXPECT_TRUE(r.exhaustive);
  EXPECT_NE(r.reason.find("complementive"), std::string::npos);
}

TEST(FindImplementation, ExhaustedBoundsAreDefinite) {
  SearchOptions opt;
  const auto r = find_implementation({presets::oit()}, presets::or2(), {2, 3}, opt);
  EXPECT_FALSE(r.found());
  EXPECT_TRUE(r.exhaustive);
}

TEST(FindImplementation, EffortLimitIsReported) {
  SearchOptions opt;
  opt.effort_limit = 10;
  const auto r = find_implementation({presets::oit()}, presets::or3(), {6, 8}, opt);
  EXPECT_FALSE(r.found());
  EXPECT_FALSE(r.exhaustive);
}

TEST(FindImplementation, InvalidRequests) {
  EXPECT_THROW(find_implementation({presets::oit()}, nullptr), InvalidArgument);
  EXPECT_THROW(find_implementation({presets::oit()}, presets::or2(), {-1, 2}), InvalidArgument);
  EXPECT_THROW(find_implementation({presets::oit()}, make_constraint("B", 7, std::string(128, '1'))), InvalidArgument);
  EXPECT_THROW(find_implementation({presets::oit()}, presets::or3(), {14, 8}), InvalidArgument);
}

TEST(FindImplementation, EveryBinaryFunctionFromOneInThree) {
  for (const auto& t : all_functions(2, [](const Constraint& c) { return c.arity() == 2; })) {
    const auto r = find_implementation({presets::oit()}, t, {6, 8});
    ASSERT_TRUE(r.found()) << t->bits() << ": " << r.reason;
    EXPECT_TRUE(check_implementation(*r.implementation));
  }
}

// Lazy canonical generation against plain subset enumeration.
TEST(FindImplementation, PruningKeepsAnswersOnBinaryTargets) {
  SearchOptions naive;
  naive.prune = false;
  for (const auto& t : all_functions(2, [](const Constraint& c) { return c.arity() == 2; })) {
    for (SearchBounds b : {SearchBounds{2, 3}, SearchBounds{3, 4}, SearchBounds{6, 8}}) {
      const auto lazy = find_implementation({presets::oit()}, t, b);
      const auto full = find_implementation({presets::oit()}, t, b, naive);
      ASSERT_EQ(lazy.found(), full.found()) << t->bits();
      if (lazy.found()) {
        EXPECT_EQ(lazy.implementation->aux_vars.size(), full.implementation->aux_vars.size()) << t->bits();
        EXPECT_EQ(lazy.implementation->apps.size(), full.implementation->apps.size()) << t->bits();
      }
    }
  }
}

TEST(FindImplementation, Deterministic) {
  const auto a = find_implementation({presets::oit()}, presets::xor2());
  const auto b = find_implementation({presets::oit()}, presets::xor2());
  ASSERT_TRUE(a.found());
  EXPECT_EQ(to_string(*a.implementation), to_string(*b.implementation));
}

TEST(FindImplementation, ConstantsVariant) {
  SearchOptions opt;
  opt.allow_constants = true;
  // NOT1 from OIT needs either an auxiliary variable or the constant 1.
  const auto r = find_implementation({presets::oit()}, presets::not1(), {0, 1}, opt);
  ASSERT_TRUE(r.found());
  EXPECT_TRUE(check_implementation(*r.implementation));
  const auto plain = find_implementation({presets::oit()}, presets::not1(), {0, 1});
  EXPECT_FALSE(plain.found());
}

TEST(FindImplementation, HelperConstraintsForEachCase) {
  for (const auto& [ds, helper] : std::vector<std::pair<std::vector<ConstraintRef>, ConstraintRef>>{
           {{presets::get("OR3_1n"), presets::nand2()}, presets::imp2()},
           {{presets::symor1()}, presets::symor1()},
           {{make_constraint("NAE3", 3, "01111110")}, presets::xor2()}}) {
    const auto r = find_implementation(ds, helper);
    ASSERT_TRUE(r.found()) << helper->name();
    EXPECT_TRUE(check_implementation(*r.implementation));
  }
}
