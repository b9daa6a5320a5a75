#include <gtest/gtest.h>

#include "oracle.hpp"
#include "qcsp/classifier.hpp"
#include "qcsp/presets.hpp"
#include "qcsp/random.hpp"

using namespace qcsp;

TEST(Classifier, ValidityFlags) {
  EXPECT_FALSE(is_zero_valid(*presets::or2()));
  EXPECT_TRUE(is_zero_valid(*presets::nand2()));
  EXPECT_TRUE(is_zero_valid(*presets::not1()));
  EXPECT_TRUE(is_one_valid(*presets::or2()));
  EXPECT_FALSE(is_one_valid(*presets::oit()));
  EXPECT_TRUE(is_one_valid(*presets::id1()));
}

TEST(Classifier, Complementive) {
  EXPECT_TRUE(is_complementive(*presets::xor2()));
  EXPECT_FALSE(is_complementive(*presets::or2()));
  EXPECT_FALSE(is_complementive(*presets::oit()));
  const auto w = property_witness(*presets::oit(), Property::Complementive);
  ASSERT_TRUE(w);
  EXPECT_FALSE(presets::oit()->value(complement_row(w->rows[0], 3)));
}

TEST(Classifier, ClosureFlags) {
  EXPECT_TRUE(is_horn(*presets::nand2()));
  EXPECT_FALSE(is_horn(*presets::or2()));
  EXPECT_FALSE(is_bijunctive(*presets::oit()));
  EXPECT_FALSE(is_affine(*presets::oit()));
  EXPECT_TRUE(is_anti_horn(*presets::or2()));
  EXPECT_TRUE(is_bijunctive(*presets::or2()));
  EXPECT_TRUE(is_affine(*presets::xor2()));
  EXPECT_FALSE(is_affine(*presets::or2()));
}

TEST(Classifier, WitnessesShowTheFailure) {
  const auto w = property_witness(*presets::or2(), Property::Horn);
  ASSERT_TRUE(w);
  ASSERT_EQ(w->rows.size(), 2U);
  EXPECT_TRUE(presets::or2()->value(w->rows[0]));
  EXPECT_TRUE(presets::or2()->value(w->rows[1]));
  EXPECT_FALSE(presets::or2()->value(w->rows[0] & w->rows[1]));

  const auto m = property_witness(*presets::oit(), Property::Bijunctive);
  ASSERT_TRUE(m);
  ASSERT_EQ(m->rows.size(), 3U);
  const auto r = m->rows;
  EXPECT_FALSE(presets::oit()->value((r[0] & r[1]) | (r[0] & r[2]) | (r[1] & r[2])));
}

TEST(Classifier, ConstantFunctionsAreBijunctiveAndAffine) {
  for (const char* bits : {"0000", "1111"}) {
    const auto c = make_constraint("K", 2, bits);
    EXPECT_TRUE(is_bijunctive(*c)) << bits;
    EXPECT_TRUE(is_affine(*c)) << bits;
    EXPECT_TRUE(is_horn(*c)) << bits;
  }
  const auto r = classify_set({presets::oit(), make_constraint("K", 2, "0000")});
  EXPECT_EQ(r.constant_members, (std::vector<std::string>{"K"}));
}

TEST(ClassifySet, OneInThree) {
  const auto r = classify_set({presets::oit()});
  for (auto p : kAllProperties) EXPECT_FALSE(r.flags.get(p)) << property_key(p);
  EXPECT_EQ(r.sat, Verdict::NPComplete);
  EXPECT_EQ(r.qsat, Verdict::PSPACEComplete);
  EXPECT_EQ(r.qsat_i, Verdict::SigmaComplete);
  EXPECT_EQ(r.qsat_ic, Verdict::SigmaComplete);
  EXPECT_EQ(r.witnesses.size(), 7U);
}

TEST(ClassifySet, XorIsPolynomialEverywhere) {
  const auto r = classify_set({presets::xor2()});
  EXPECT_TRUE(r.flags.affine);
  EXPECT_TRUE(r.flags.complementive);
  for (Verdict v : {r.sat, r.sat_c, r.qsat, r.qsat_c, r.qsat_1, r.qsat_1c, r.qsat_i, r.qsat_ic}) EXPECT_EQ(v, Verdict::P);
}

TEST(ClassifySet, CnfSetD) {
  const auto r = classify_set(presets::cnf3_set());
  EXPECT_FALSE(r.schaefer());
  EXPECT_EQ(r.qsat_i, Verdict::SigmaComplete);
  EXPECT_EQ(r.sat_c, Verdict::NPComplete);
}

TEST(ClassifySet, ZeroValidSetHasEasySatButHardSatC) {
  const auto r = classify_set({presets::get("OR3_1n"), presets::nand2()});
  EXPECT_TRUE(r.flags.zero_valid);
  EXPECT_FALSE(r.schaefer());
  EXPECT_EQ(r.sat, Verdict::P);
  EXPECT_EQ(r.qsat_1, Verdict::P);
  EXPECT_EQ(r.sat_c, Verdict::NPComplete);
  EXPECT_EQ(r.qsat_level(1, true), Verdict::NPComplete);
  EXPECT_EQ(r.qsat_level(5, false), Verdict::SigmaComplete);
}

TEST(ClassifySet, EmptySetIsAnError) { EXPECT_THROW(classify_set({}), InvalidArgument); }

TEST(ClassifySet, TextAndJson) {
  const auto r = classify_set({presets::xor2()});
  const auto text = to_text(r);
  EXPECT_NE(text.find("verdicts.qsat=P\n"), std::string::npos);
  EXPECT_NE(text.find("flags.affine=true\n"), std::string::npos);
  EXPECT_NE(text.find("witnesses.horn=XOR2:"), std::string::npos);
  const auto j = to_json(classify_set({presets::oit()}));
  EXPECT_EQ(j["verdicts"]["qsat_i"], "Sigma_i-complete");
  EXPECT_EQ(j["flags"]["horn"], false);
  EXPECT_TRUE(j["witnesses"].contains("affine"));
}

// Flags of every function of arity <= 3 against clause-set definability
// computed straight from the table.
TEST(Classifier, MatchesDefinabilityOracleExhaustively) {
  const std::pair<Property, oracle::Form> pairs[] = {{Property::Horn, oracle::Form::Horn},
                                                     {Property::AntiHorn, oracle::Form::AntiHorn},
                                                     {Property::Bijunctive, oracle::Form::TwoCnf},
                                                     {Property::Affine, oracle::Form::Xor}};
  for (const auto& c : all_functions(3, [](const Constraint&) { return true; })) {
    for (const auto& [p, form] : pairs) {
      ASSERT_EQ(has_property(*c, p), oracle::definable(*c, form)) << c->bits() << " " << property_key(p);
    }
  }
}

// Arity 7 forces the fast closure paths (more than 64 satisfying rows).
TEST(Classifier, FastPathsMatchDefinability) {
  Rng rng(3);
  const std::pair<Property, oracle::Form> pairs[] = {{Property::Horn, oracle::Form::Horn},
                                                     {Property::AntiHorn, oracle::Form::AntiHorn},
                                                     {Property::Bijunctive, oracle::Form::TwoCnf},
                                                     {Property::Affine, oracle::Form::Xor}};
  auto from_rows = [](int k, const std::vector<bool>& sat) {
    std::string bits;
    for (bool b : sat) bits += b ? '1' : '0';
    return make_constraint("F", k, bits);
  };
  const int k = 7;
  const std::uint32_t rows = 1U << k;
  for (int trial = 0; trial < 40; ++trial) {
    // Random clause conjunctions of each kind, then a random flip.
    for (const auto& [p, form] : pairs) {
      std::vector<bool> sat(rows, true);
      const int clauses = uniform_int(rng, 1, 3);
      for (int cl = 0; cl < clauses; ++cl) {
        if (form == oracle::Form::Xor) {
          const std::uint32_t mask = static_cast<std::uint32_t>(uniform_int(rng, 1, static_cast<int>(rows) - 1));
          const int parity = uniform_int(rng, 0, 1);
          for (std::uint32_t r = 0; r < rows; ++r) sat[r] = sat[r] && (std::popcount(r & mask) & 1) == parity;
        } else {
          std::vector<int> sign(k, 0);
          const int width = form == oracle::Form::TwoCnf ? 2 : uniform_int(rng, 1, 4);
          for (int w = 0; w < width; ++w) {
            const int i = uniform_int(rng, 0, k - 1);
            int s = coin(rng) ? 1 : 2;
            if (form == oracle::Form::Horn && w > 0) s = 2;
            if (form == oracle::Form::AntiHorn && w > 0) s = 1;
            sign[i] = s;
          }
          for (std::uint32_t r = 0; r < rows; ++r) sat[r] = sat[r] && oracle::clause_holds(sign, r, k);
        }
      }
      auto c = from_rows(k, sat);
      for (const auto& [q, f2] : pairs) {
        ASSERT_EQ(has_property(*c, q), oracle::definable(*c, f2)) << c->bits() << " " << property_key(q);
      }
      sat[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(rows) - 1))].flip();
      c = from_rows(k, sat);
      for (const auto& [q, f2] : pairs) {
        ASSERT_EQ(has_property(*c, q), oracle::definable(*c, f2)) << c->bits() << " " << property_key(q);
      }
    }
  }
}

TEST(ClassifySet, FlagsAreMonotoneAndVerdictsConsistent) {
  Rng rng(5);
  const auto pool = all_functions(3, [](const Constraint&) { return true; });
  for (int i = 0; i < 1000; ++i) {
    const auto cs = sample_constraints(rng, pool, uniform_int(rng, 1, 4));
    const auto r = classify_set(cs);
    auto bigger = cs;
    bigger.push_back(pool[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(pool.size()) - 1))]);
    const auto r2 = classify_set(bigger);
    for (auto p : kAllProperties) ASSERT_TRUE(!r2.flags.get(p) || r.flags.get(p));
    if (r.schaefer()) {
      for (Verdict v : {r.sat_c, r.qsat, r.qsat_c, r.qsat_i, r.qsat_ic}) ASSERT_EQ(v, Verdict::P);
    } else {
      ASSERT_EQ(r.qsat_i, Verdict::SigmaComplete);
      ASSERT_EQ(r.qsat_ic, Verdict::SigmaComplete);
    }
  }
}
