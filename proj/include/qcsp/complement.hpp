#pragma once

#include <utility>
#include <vector>

#include "qcsp/classifier.hpp"
#include "qcsp/expression.hpp"

namespace qcsp {

inline constexpr std::string_view kComplementSuffix = "_c";

/// C^c(s) = C(s̄). A complementive constraint is returned unchanged; otherwise
/// the name gains (or loses) the suffix "_c", so complementing twice restores
/// the original constraint including its name.
inline ConstraintRef complement_constraint(const ConstraintRef& c) {
  if (is_complementive(*c)) return c;
  const std::string& name = c->name();
  std::string flipped_name =
      name.size() > kComplementSuffix.size() && name.ends_with(kComplementSuffix)
          ? name.substr(0, name.size() - kComplementSuffix.size())
          : name + std::string(kComplementSuffix);
  std::string bits(c->rows(), '0');
  for (std::uint32_t r = 0; r < c->rows(); ++r) {
    if (c->value(complement_row(r, c->arity()))) bits[r] = '1';
  }
  return make_constraint(std::move(flipped_name), c->arity(), bits);
}

inline std::vector<ConstraintRef> complement_set(const std::vector<ConstraintRef>& cs) {
  std::vector<ConstraintRef> out;
  out.reserve(cs.size());
  for (const auto& c : cs) out.push_back(complement_constraint(c));
  return out;
}

/// Replaces every constraint by its complement and swaps the constants 0 and
/// 1. The prefix is kept and the truth value is preserved.
inline QuantifiedExpression complement_expression(const QuantifiedExpression& expr) {
  std::vector<std::pair<ConstraintRef, ConstraintRef>> cache;
  auto lookup = [&](const ConstraintRef& c) {
    for (const auto& [from, to] : cache) {
      if (same_constraint(from, c)) return to;
    }
    cache.emplace_back(c, complement_constraint(c));
    return cache.back().second;
  };
  std::vector<ConstraintApplication> matrix;
  matrix.reserve(expr.matrix().size());
  for (const auto& app : expr.matrix()) {
    std::vector<Argument> args;
    for (const auto& a : app.args()) args.push_back(a.is_constant() ? Argument::constant(!a.constant_value()) : a);
    matrix.emplace_back(lookup(app.constraint()), std::move(args));
  }
  return QuantifiedExpression(expr.prefix(), std::move(matrix));
}

}  // namespace qcsp
