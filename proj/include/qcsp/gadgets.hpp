#pragma once

// Truth-preserving transformations of quantified expressions: substitution
// of perfect implementations, elimination of unary ID/NOT applications, and
// removal of constant arguments.
//
// Constant removal dispatches on the flags of the non-constant members of the
// constraint set, in this order:
//
//   (e) neither 0- nor 1-valid, not complementive: ∃f∃t in the last block,
//       pinned to f=0, t=1 by three two-variable "hat" applications.
//   (d) neither 0- nor 1-valid, complementive: f ⊕ t. Odd levels put ∃f∃t
//       first; even levels use ∀b first and ∃b' last.
//   (c) 0-valid and complementive: x in the first block, ∀y∀z before ∃f∃t,
//       with SYMOR1(x,f,y), SYMOR1(x,z,t).
//   (a) 0-valid, not complementive: ∀y∀z before ∃f∃t with f̄∨y, z̄∨t.
//   (b) 1-valid, not complementive: complement, apply (a), complement back.
//
// A set that is 1-valid and complementive is also 0-valid, so (c) covers it.
// Helper constraints (⊕, SYMOR1, x̄∨y) are replaced through implementations
// found by the bounded search; their auxiliary variables join the last block.

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "qcsp/classifier.hpp"
#include "qcsp/complement.hpp"
#include "qcsp/impl_search.hpp"
#include "qcsp/presets.hpp"

namespace qcsp {

enum class ReductionCase { ZeroValidNotComp, OneValidNotComp, ZeroValidComp, NeitherValidComp, NeitherValidNotComp };

inline std::string to_string(ReductionCase c) {
  switch (c) {
    case ReductionCase::ZeroValidNotComp: return "a:zero-valid,not-complementive";
    case ReductionCase::OneValidNotComp: return "b:one-valid,not-complementive";
    case ReductionCase::ZeroValidComp: return "c:zero-valid,complementive";
    case ReductionCase::NeitherValidComp: return "d:neither-valid,complementive";
    case ReductionCase::NeitherValidNotComp: return "e:neither-valid,not-complementive";
  }
  return "?";
}

struct ReductionResult {
  /// Empty when the input was found trivially false.
  std::optional<QuantifiedExpression> expression;
  std::optional<ReductionCase> case_used;
  std::vector<Implementation> implementations_used;

  bool trivially_false() const noexcept { return !expression.has_value(); }
};

namespace detail {

// Replaces every application of impl.target with a fresh copy of the
// implementation. Works on raw blocks so callers may hold empty blocks.
inline void substitute_raw(std::vector<QuantifierBlock>& blocks, std::vector<ConstraintApplication>& matrix,
                           const Implementation& impl, FreshNames& fresh) {
  std::vector<ConstraintApplication> out;
  bool replaced = false;
  for (const auto& app : matrix) {
    if (!same_constraint(app.constraint(), impl.target)) {
      out.push_back(app);
      continue;
    }
    replaced = true;
    std::map<std::string, Argument> bind;
    for (std::size_t j = 0; j < impl.primary_vars.size(); ++j) bind.emplace(impl.primary_vars[j], app.args()[j]);
    std::vector<std::string> copies;
    for (const auto& y : impl.aux_vars) {
      copies.push_back(fresh.make(y));
      bind.emplace(y, Argument::variable(copies.back()));
    }
    if (!copies.empty()) {
      if (blocks.empty() || blocks.back().quantifier != Quantifier::Exists) {
        throw ShapeMismatch("implementation variables need an innermost existential block");
      }
      auto& last = blocks.back().vars;
      last.insert(last.end(), copies.begin(), copies.end());
    }
    for (const auto& sub : impl.apps) {
      std::vector<Argument> args;
      for (const auto& a : sub.args()) args.push_back(a.is_constant() ? a : bind.at(a.name()));
      out.emplace_back(sub.constraint(), std::move(args));
    }
  }
  if (replaced) matrix = std::move(out);
}

}  // namespace detail

/// Replaces each application of impl.target by the implementation, with
/// fresh auxiliary variables per application appended to the innermost
/// block, which must be existential.
inline QuantifiedExpression substitute_implementation(const QuantifiedExpression& expr, const Implementation& impl) {
  if (!check_implementation(impl)) {
    throw InvalidArgument("implementation of '" + (impl.target ? impl.target->name() : std::string("?")) +
                          "' is not valid");
  }
  if (!impl.aux_vars.empty() && (expr.prefix().empty() || expr.prefix().back().quantifier != Quantifier::Exists)) {
    throw ShapeMismatch("substitution requires an existential innermost block");
  }
  auto blocks = expr.prefix();
  auto matrix = expr.matrix();
  FreshNames fresh(expr);
  detail::substitute_raw(blocks, matrix, impl, fresh);
  return QuantifiedExpression(std::move(blocks), std::move(matrix));
}

/// Removes unary ID1/NOT1 applications. A variable forced by them is
/// replaced by the forced constant and dropped from the prefix. Conflicting
/// forces, a falsified constant application, or a force on a universal
/// variable make the expression trivially false.
inline ReductionResult eliminate_unary(const QuantifiedExpression& expr) {
  std::map<std::string, bool> forced;
  std::vector<ConstraintApplication> rest;
  ReductionResult res;
  for (const auto& app : expr.matrix()) {
    const auto& c = *app.constraint();
    if (c.arity() != 1) {
      rest.push_back(app);
      continue;
    }
    if (c.is_constant_false() || c.is_constant_true()) {
      throw InvalidArgument("unary constraint '" + c.name() + "' is neither ID1 nor NOT1");
    }
    const bool want = c.value(1);  // ID1 forces 1, NOT1 forces 0
    const Argument& a = app.args()[0];
    if (a.is_constant()) {
      if (a.constant_value() != want) return res;
      continue;
    }
    auto [it, inserted] = forced.emplace(a.name(), want);
    if (!inserted && it->second != want) return res;
  }
  for (const auto& [name, value] : forced) {
    if (expr.prefix()[static_cast<std::size_t>(expr.block_of(name))].quantifier == Quantifier::Forall) return res;
  }
  auto matrix = map_arguments(rest, [&](const Argument& a) {
    if (a.is_variable()) {
      auto it = forced.find(a.name());
      if (it != forced.end()) return Argument::constant(it->second);
    }
    return a;
  });
  std::vector<QuantifierBlock> prefix = expr.prefix();
  for (auto& b : prefix) std::erase_if(b.vars, [&](const std::string& v) { return forced.count(v) > 0; });
  res.expression = QuantifiedExpression::normalized(std::move(prefix), std::move(matrix));
  return res;
}

/// Two-variable specialisation of a constraint: argument i becomes the first
/// variable where row s has a 0 and the second where it has a 1. So the hat
/// is true on (0,1) and agrees with C(0...0) on (0,0), with C(1...1) on
/// (1,1) and with C(s̄) on (1,0).
struct HatTemplate {
  ConstraintRef constraint;
  std::uint32_t row = 0;

  ConstraintApplication apply(const Argument& x, const Argument& y) const {
    std::vector<Argument> args;
    const int k = constraint->arity();
    for (int i = 0; i < k; ++i) args.push_back(row_bit(row, k, i) ? y : x);
    return ConstraintApplication(constraint, std::move(args));
  }

  bool value(bool x, bool y) const {
    const int k = constraint->arity();
    std::uint32_t r = 0;
    for (int i = 0; i < k; ++i) r = (r << 1) | static_cast<std::uint32_t>(row_bit(row, k, i) ? y : x);
    return constraint->value(r);
  }
};

inline HatTemplate build_hat(const ConstraintRef& c, std::uint32_t satisfying_row) {
  if (satisfying_row >= c->rows() || !c->value(satisfying_row)) {
    throw InvalidArgument("row " + std::to_string(satisfying_row) + " does not satisfy '" + c->name() + "'");
  }
  return HatTemplate{c, satisfying_row};
}

/// Caches implementation searches across reductions. Thread-safe.
class ImplementationCache {
 public:
  SearchResult find(const std::vector<ConstraintRef>& ds, const ConstraintRef& target, SearchBounds bounds,
                    SearchOptions options) {
    std::string key = target->name() + ":" + target->bits() + "|" + std::to_string(bounds.max_aux) + "," +
                      std::to_string(bounds.max_apps) + "," + std::to_string(options.effort_limit) +
                      (options.prune ? "p" : "n") + (options.allow_constants ? "c" : "");
    for (const auto& d : ds) key += "|" + d->name() + ":" + d->bits();
    {
      std::lock_guard<std::mutex> lock(mutex_);
      auto it = cache_.find(key);
      if (it != cache_.end()) return it->second;
    }
    SearchResult res = find_implementation(ds, target, bounds, options);
    std::lock_guard<std::mutex> lock(mutex_);
    return cache_.emplace(key, std::move(res)).first->second;
  }

 private:
  std::mutex mutex_;
  std::map<std::string, SearchResult> cache_;
};

struct RemovalOptions {
  SearchBounds bounds;
  SearchOptions search;
  std::shared_ptr<ImplementationCache> cache;
};

/// Members that are neither constant-true nor constant-false.
inline std::vector<ConstraintRef> non_constant_members(const std::vector<ConstraintRef>& cs) {
  std::vector<ConstraintRef> out;
  for (const auto& c : cs) {
    if (!c->is_constant_true() && !c->is_constant_false()) out.push_back(c);
  }
  return out;
}

/// The constant-removal case for `cs`, from the flags of its non-constant
/// members. Throws NotApplicable for a Schaefer set.
inline ReductionCase reduction_case(const std::vector<ConstraintRef>& cs) {
  if (cs.empty()) throw InvalidArgument("empty constraint set");
  if (classify_set(cs).schaefer()) throw NotApplicable("NotApplicable: Schaefer set");
  const auto f = classify_set(non_constant_members(cs)).flags;
  if (!f.zero_valid && !f.one_valid) {
    return f.complementive ? ReductionCase::NeitherValidComp : ReductionCase::NeitherValidNotComp;
  }
  if (f.complementive) return ReductionCase::ZeroValidComp;
  return f.zero_valid ? ReductionCase::ZeroValidNotComp : ReductionCase::OneValidNotComp;
}

namespace detail {

inline bool case_matches(ReductionCase rc, const PropertyFlags& f) {
  switch (rc) {
    case ReductionCase::NeitherValidNotComp: return !f.zero_valid && !f.one_valid && !f.complementive;
    case ReductionCase::NeitherValidComp: return !f.zero_valid && !f.one_valid && f.complementive;
    case ReductionCase::ZeroValidComp: return f.zero_valid && f.complementive;
    case ReductionCase::ZeroValidNotComp: return f.zero_valid && !f.complementive;
    case ReductionCase::OneValidNotComp: return f.one_valid && !f.complementive;
  }
  return false;
}

inline Implementation helper_implementation(const std::vector<ConstraintRef>& ds, const ConstraintRef& helper,
                                            const RemovalOptions& opt) {
  SearchOptions search = opt.search;
  search.allow_constants = false;
  SearchResult res =
      opt.cache ? opt.cache->find(ds, helper, opt.bounds, search) : find_implementation(ds, helper, opt.bounds, search);
  if (!res.found()) {
    throw ImplementationNotFound("no implementation of " + helper->name() + " found: " + res.reason);
  }
  return *res.implementation;
}

inline ConstraintApplication apply2(const ConstraintRef& c, const std::string& a, const std::string& b) {
  return ConstraintApplication(c, {Argument::variable(a), Argument::variable(b)});
}

inline ConstraintApplication apply3(const ConstraintRef& c, const std::string& a, const std::string& b,
                                    const std::string& d) {
  return ConstraintApplication(c, {Argument::variable(a), Argument::variable(b), Argument::variable(d)});
}

inline std::vector<QuantifierBlock> nominal_blocks(const QuantifiedExpression& expr, int level) {
  std::vector<QuantifierBlock> blocks(static_cast<std::size_t>(level));
  Quantifier q = nominal_shape(level).polarity == Polarity::Sigma ? Quantifier::Exists : Quantifier::Forall;
  for (auto& b : blocks) {
    b.quantifier = q;
    q = opposite(q);
  }
  for (std::size_t j = 0; j < expr.prefix().size(); ++j) blocks[j].vars = expr.prefix()[j].vars;
  return blocks;
}

inline void pad_blocks(std::vector<QuantifierBlock>& blocks, FreshNames& fresh) {
  for (auto& b : blocks) {
    if (b.vars.empty()) b.vars.push_back(fresh.make("p"));
  }
}

inline ReductionResult remove_constants_case(const QuantifiedExpression& expr, const std::vector<ConstraintRef>& cs,
                                             int level, ReductionCase rc, const RemovalOptions& opt) {
  if (!expr.has_constants()) {
    auto blocks = nominal_blocks(expr, level);
    FreshNames fresh(expr);
    pad_blocks(blocks, fresh);
    ReductionResult res;
    res.case_used = rc;
    res.expression = QuantifiedExpression(std::move(blocks), expr.matrix());
    return res;
  }
  if (rc == ReductionCase::OneValidNotComp) {
    const auto cs_c = complement_set(cs);
    ReductionResult inner =
        remove_constants_case(complement_expression(expr), cs_c, level, ReductionCase::ZeroValidNotComp, opt);
    ReductionResult res;
    res.case_used = rc;
    if (inner.expression) res.expression = complement_expression(*inner.expression);
    for (const auto& impl : inner.implementations_used) {
      Implementation back = impl;
      back.target = complement_constraint(impl.target);
      back.apps.clear();
      for (const auto& a : impl.apps) back.apps.emplace_back(complement_constraint(a.constraint()), a.args());
      res.implementations_used.push_back(std::move(back));
    }
    return res;
  }
  const bool needs_outer_universal = rc == ReductionCase::ZeroValidNotComp || rc == ReductionCase::ZeroValidComp;
  if (needs_outer_universal && level < 2) {
    throw ShapeMismatch("case " + to_string(rc) + " needs level 2 or more");
  }

  // Blocks of the nominal shape, possibly empty for now.
  std::vector<QuantifierBlock> blocks = nominal_blocks(expr, level);
  std::vector<ConstraintApplication> matrix = expr.matrix();
  FreshNames fresh(expr);
  const auto members = non_constant_members(cs);
  ReductionResult res;
  res.case_used = rc;

  const auto last = static_cast<std::size_t>(level - 1);
  std::string zero, one;
  auto use_helper = [&](const ConstraintRef& helper) {
    Implementation impl = helper_implementation(members, helper, opt);
    res.implementations_used.push_back(impl);
    return impl;
  };
  std::vector<Implementation> pending;

  switch (rc) {
    case ReductionCase::NeitherValidNotComp: {
      zero = fresh.make("f");
      one = fresh.make("t");
      blocks[last].vars.push_back(zero);
      blocks[last].vars.push_back(one);
      ConstraintRef a, b, c;
      std::uint32_t sa = 0, sb = 0, sc = 0;
      for (const auto& m : members) {
        const int k = m->arity();
        if (!a && !is_zero_valid(*m)) a = m, sa = m->satisfying_rows().front();
        if (!b && !is_one_valid(*m)) b = m, sb = m->satisfying_rows().front();
        if (!c) {
          for (std::uint32_t r = 0; r < m->rows(); ++r) {
            if (m->value(r) && !m->value(complement_row(r, k))) {
              c = m, sc = r;
              break;
            }
          }
        }
      }
      const Argument fz = Argument::variable(zero), ft = Argument::variable(one);
      for (const auto& hat : {build_hat(a, sa), build_hat(b, sb), build_hat(c, sc)}) {
        auto app = hat.apply(fz, ft);
        if (std::find(matrix.begin(), matrix.end(), app) == matrix.end()) matrix.push_back(std::move(app));
      }
      break;
    }
    case ReductionCase::NeitherValidComp: {
      const auto xor2 = presets::xor2();
      if (level % 2 == 1) {
        zero = fresh.make("f");
        one = fresh.make("t");
        blocks[0].vars.insert(blocks[0].vars.begin(), {zero, one});
      } else {
        zero = fresh.make("b");
        one = fresh.make("b_prime");
        blocks[0].vars.insert(blocks[0].vars.begin(), zero);
        blocks[last].vars.push_back(one);
      }
      matrix.push_back(apply2(xor2, zero, one));
      pending.push_back(use_helper(xor2));
      break;
    }
    case ReductionCase::ZeroValidComp: {
      const auto sym = presets::symor1();
      const std::string x = fresh.make("x"), y = fresh.make("y"), z = fresh.make("z");
      zero = fresh.make("f");
      one = fresh.make("t");
      // x goes first: the x=1 branch pins (f,t)=(1,0) and only matches the
      // x=0 branch when every other variable may be complemented with it.
      blocks[0].vars.insert(blocks[0].vars.begin(), x);
      auto& outer = blocks[last - 1].vars;
      outer.insert(outer.end(), {y, z});
      blocks[last].vars.insert(blocks[last].vars.begin(), {zero, one});
      matrix.push_back(apply3(sym, x, zero, y));
      matrix.push_back(apply3(sym, x, z, one));
      pending.push_back(use_helper(sym));
      break;
    }
    case ReductionCase::ZeroValidNotComp: {
      const auto imp = presets::imp2();
      const std::string y = fresh.make("y"), z = fresh.make("z");
      zero = fresh.make("f");
      one = fresh.make("t");
      auto& outer = blocks[last - 1].vars;
      outer.insert(outer.end(), {y, z});
      blocks[last].vars.insert(blocks[last].vars.begin(), {zero, one});
      matrix.push_back(apply2(imp, zero, y));
      matrix.push_back(apply2(imp, z, one));
      pending.push_back(use_helper(imp));
      break;
    }
    case ReductionCase::OneValidNotComp:
      break;
  }

  matrix = map_arguments(matrix, [&](const Argument& a) {
    if (a.is_variable()) return a;
    return Argument::variable(a.constant_value() ? one : zero);
  });
  for (const auto& impl : pending) substitute_raw(blocks, matrix, impl, fresh);
  pad_blocks(blocks, fresh);
  res.expression = QuantifiedExpression(std::move(blocks), std::move(matrix));
  return res;
}

}  // namespace detail

/// Rewrites a QSAT_{i,c} instance over `cs` into a constant-free QSAT_i
/// instance with the same truth value. The input must fit level i (same
/// polarity as the nominal Sigma_i / Pi_i shape, no more blocks); the output
/// always has the full nominal shape, with otherwise empty blocks holding one
/// unused variable. Throws NotApplicable for a Schaefer set.
inline ReductionResult remove_constants(const QuantifiedExpression& expr, const std::vector<ConstraintRef>& cs,
                                        int level, const RemovalOptions& options = {}) {
  if (level < 1) throw InvalidArgument("level must be at least 1");
  const ReductionCase rc = reduction_case(cs);
  for (const auto& c : expr.constraints()) {
    if (std::none_of(cs.begin(), cs.end(), [&](const auto& m) { return same_constraint(m, c); })) {
      throw InvalidArgument("constraint '" + c->name() + "' is not in the constraint set");
    }
  }
  const PrefixShape shape = prefix_shape(expr);
  if (!fits_level(shape, level)) {
    throw ShapeMismatch("expression of shape " + to_string(shape) + " does not fit " + to_string(nominal_shape(level)));
  }
  return detail::remove_constants_case(expr, cs, level, rc, options);
}

/// Applies one case construction directly, without requiring a non-Schaefer
/// set. The flags of the non-constant members must match the case.
inline ReductionResult remove_constants_with_case(const QuantifiedExpression& expr,
                                                  const std::vector<ConstraintRef>& cs, int level, ReductionCase rc,
                                                  const RemovalOptions& options = {}) {
  if (level < 1) throw InvalidArgument("level must be at least 1");
  const auto members = non_constant_members(cs);
  if (members.empty() || !detail::case_matches(rc, classify_set(members).flags)) {
    throw InvalidArgument("constraint set does not match case " + to_string(rc));
  }
  const PrefixShape shape = prefix_shape(expr);
  if (!fits_level(shape, level)) {
    throw ShapeMismatch("expression of shape " + to_string(shape) + " does not fit " + to_string(nominal_shape(level)));
  }
  return detail::remove_constants_case(expr, cs, level, rc, options);
}

}  // namespace qcsp
