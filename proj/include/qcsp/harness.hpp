#pragma once

// Differential verification suites run by `qcsp verify`. Each instance is
// checked against the brute-force evaluator; instances the evaluator refuses
// (budget) or for which no helper implementation is found are skipped and
// counted separately.

#include <chrono>
#include <functional>
#include <string>
#include <vector>

#include "qcsp/classifier.hpp"
#include "qcsp/evaluator.hpp"
#include "qcsp/gadgets.hpp"
#include "qcsp/random.hpp"
#include "qcsp/solvers.hpp"

namespace qcsp {

struct SuiteReport {
  std::string name;
  std::uint64_t passed = 0;
  std::uint64_t failed = 0;
  std::uint64_t skipped = 0;
  double seconds = 0;
  std::vector<std::string> failures;  // first few, for diagnostics

  bool ok() const noexcept { return failed == 0; }

  void fail(std::string what) {
    ++failed;
    if (failures.size() < 10) failures.push_back(std::move(what));
  }
};

struct HarnessConfig {
  std::uint64_t seed = 1;
  int instances = 200;
  EvalBudget budget{};
};

/// Closure flags against normal-form synthesis for every function of arity
/// 1..3, plus `instances` random arity-4 functions.
inline SuiteReport verify_classifier(const HarnessConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  SuiteReport rep;
  rep.name = "classifier";
  const std::pair<Property, NormalFormKind> pairs[] = {{Property::Horn, NormalFormKind::HornCNF},
                                                       {Property::AntiHorn, NormalFormKind::AntiHornCNF},
                                                       {Property::Bijunctive, NormalFormKind::TwoCNF},
                                                       {Property::Affine, NormalFormKind::XorCNF}};
  auto check = [&](const Constraint& c) {
    bool ok = true;
    for (const auto& [p, kind] : pairs) {
      if (has_property(c, p) != synthesize_normal_form(c, kind).has_value()) {
        rep.fail(c.bits() + ": " + property_key(p) + " disagrees with synthesis");
        ok = false;
      }
    }
    bool comp = true;
    for (std::uint32_t r = 0; r < c.rows(); ++r) comp = comp && c.value(r) == c.value(complement_row(r, c.arity()));
    if (is_zero_valid(c) != c.value(0) || is_one_valid(c) != c.value(c.rows() - 1) || is_complementive(c) != comp) {
      rep.fail(c.bits() + ": table-read property mismatch");
      ok = false;
    }
    if (ok) ++rep.passed;
  };
  for (const auto& c : all_functions(3, [](const Constraint&) { return true; })) check(*c);
  Rng rng(cfg.seed);
  for (int i = 0; i < cfg.instances; ++i) check(*random_constraint(rng, 4, "R4"));
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

/// Random expressions per tractable class, solved both ways.
inline SuiteReport verify_solvers(const HarnessConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  SuiteReport rep;
  rep.name = "solvers";
  Rng rng(cfg.seed);
  for (auto cls : {TractableClass::Horn, TractableClass::AntiHorn, TractableClass::Bijunctive, TractableClass::Affine}) {
    const Property p = class_property(cls);
    const auto pool = all_functions(3, [&](const Constraint& c) { return has_property(c, p); });
    for (int i = 0; i < cfg.instances; ++i) {
      ExpressionParams params;
      params.min_vars = 1;
      params.max_vars = 14;
      params.max_apps = 20;
      params.constant_prob = 0.1;
      const auto expr = random_expression(rng, sample_constraints(rng, pool, 4), params);
      try {
        if (solve_tractable(expr, cls) == eval(expr, cfg.budget)) {
          ++rep.passed;
        } else {
          rep.fail(to_string(cls) + " instance " + std::to_string(i));
        }
      } catch (const BudgetExceeded&) {
        ++rep.skipped;
      }
    }
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

/// A non-Schaefer constraint set for each constant-removal case.
inline std::vector<std::pair<ReductionCase, std::vector<ConstraintRef>>> reduction_case_sets() {
  const auto nae3 = make_constraint("NAE3", 3, "01111110");
  return {
      {ReductionCase::ZeroValidNotComp, {presets::get("OR3_1n"), presets::nand2()}},
      {ReductionCase::OneValidNotComp, {presets::or2(), presets::get("OR3_2n")}},
      {ReductionCase::ZeroValidComp, {presets::symor1()}},
      {ReductionCase::NeitherValidComp, {nae3}},
      {ReductionCase::NeitherValidNotComp, {presets::oit()}},
  };
}

/// Random Sigma_2, Pi_2 and Sigma_3 instances with constants. Sigma_2 is a
/// truncated Sigma_3 shape and is reduced at level 3.
inline QuantifiedExpression random_reduction_instance(Rng& rng, const std::vector<ConstraintRef>& cs, int shape_index,
                                                      int& level) {
  ExpressionParams p;
  p.min_vars = 3;
  p.max_vars = 7;
  p.min_apps = 1;
  p.max_apps = 7;
  p.constant_prob = 0.25;
  switch (shape_index % 3) {
    case 0:
      p.blocks = 2, p.first = Quantifier::Exists, level = 3;
      break;
    case 1:
      p.blocks = 2, p.first = Quantifier::Forall, level = 2;
      break;
    default:
      p.blocks = 3, p.first = Quantifier::Exists, level = 3;
      break;
  }
  for (;;) {
    auto e = random_expression(rng, cs, p);
    if (e.has_constants()) return e;
  }
}

/// Constant removal per case (truth and nominal shape preserved, output
/// constant-free) and the complement transform (truth preserved).
inline SuiteReport verify_reductions(const HarnessConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  SuiteReport rep;
  rep.name = "reductions";
  Rng rng(cfg.seed);
  RemovalOptions opt;
  opt.cache = std::make_shared<ImplementationCache>();
  for (const auto& [rc, cs] : reduction_case_sets()) {
    for (int i = 0; i < cfg.instances; ++i) {
      int level = 0;
      const auto expr = random_reduction_instance(rng, cs, i, level);
      const std::string tag = to_string(rc) + " instance " + std::to_string(i);
      try {
        const bool before = eval(expr, cfg.budget);
        const auto res = remove_constants(expr, cs, level, opt);
        if (res.case_used != rc) {
          rep.fail(tag + ": dispatched to " + to_string(*res.case_used));
          continue;
        }
        const auto& out = *res.expression;
        if (out.has_constants()) {
          rep.fail(tag + ": output has constants");
        } else if (prefix_shape(out) != nominal_shape(level)) {
          rep.fail(tag + ": shape " + to_string(prefix_shape(out)));
        } else if (eval(out, cfg.budget) != before) {
          rep.fail(tag + ": truth value changed");
        } else if (eval(complement_expression(expr), cfg.budget) != before) {
          rep.fail(tag + ": complement changed the truth value");
        } else {
          ++rep.passed;
        }
      } catch (const BudgetExceeded&) {
        ++rep.skipped;
      } catch (const ImplementationNotFound&) {
        ++rep.skipped;
      }
    }
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"classifier", "reductions", "solvers", "all"};
  return names;
}

inline std::vector<SuiteReport> run_suite(const std::string& name, const HarnessConfig& cfg) {
  std::vector<SuiteReport> out;
  if (name == "classifier" || name == "all") out.push_back(verify_classifier(cfg));
  if (name == "reductions" || name == "all") out.push_back(verify_reductions(cfg));
  if (name == "solvers" || name == "all") out.push_back(verify_solvers(cfg));
  if (out.empty()) throw InvalidArgument("unknown suite '" + name + "'");
  return out;
}

}  // namespace qcsp
