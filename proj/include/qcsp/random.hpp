#pragma once

// Seeded generators for constraints and quantified expressions. All draws go
// through std::mt19937_64 so runs are reproducible from the seed.

#include <algorithm>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "qcsp/classifier.hpp"
#include "qcsp/expression.hpp"

namespace qcsp {

using Rng = std::mt19937_64;

inline int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

inline ConstraintRef random_constraint(Rng& rng, int arity, const std::string& name) {
  std::string bits(std::size_t{1} << arity, '0');
  for (auto& b : bits) b = coin(rng) ? '1' : '0';
  return make_constraint(name, arity, bits);
}

/// Every function of arity 1..max_arity that satisfies `keep`, named
/// R<arity>_<table>.
inline std::vector<ConstraintRef> all_functions(int max_arity, const std::function<bool(const Constraint&)>& keep) {
  std::vector<ConstraintRef> out;
  for (int k = 1; k <= max_arity; ++k) {
    const std::uint32_t rows = std::uint32_t{1} << k;
    for (std::uint64_t t = 0; t < (std::uint64_t{1} << rows); ++t) {
      std::string bits(rows, '0');
      for (std::uint32_t r = 0; r < rows; ++r) {
        if ((t >> r) & 1U) bits[r] = '1';
      }
      auto c = make_constraint("R" + std::to_string(k) + "_" + bits, k, bits);
      if (keep(*c)) out.push_back(std::move(c));
    }
  }
  return out;
}

struct ExpressionParams {
  int min_vars = 1;
  int max_vars = 8;
  int min_apps = 1;
  int max_apps = 10;
  /// Number of quantifier blocks; -1 draws between 1 and the variable count.
  int blocks = -1;
  /// First block quantifier; unset draws it.
  std::optional<Quantifier> first;
  /// Probability that an argument is a constant.
  double constant_prob = 0.0;
};

/// A well-formed expression with variables v0, v1, ... split into the
/// requested number of nonempty alternating blocks. Every application draws
/// its constraint from `pool`.
inline QuantifiedExpression random_expression(Rng& rng, const std::vector<ConstraintRef>& pool,
                                              const ExpressionParams& p) {
  if (pool.empty()) throw InvalidArgument("random_expression needs a nonempty constraint pool");
  const int n = uniform_int(rng, p.min_vars, std::max(p.min_vars, p.max_vars));
  int blocks = p.blocks < 0 ? (n == 0 ? 0 : uniform_int(rng, 1, n)) : p.blocks;
  if (blocks > n) throw InvalidArgument("more blocks than variables");
  // Block sizes: each block gets one variable, the rest are spread at random.
  std::vector<int> sizes(static_cast<std::size_t>(blocks), 1);
  for (int i = blocks; i < n; ++i) ++sizes[static_cast<std::size_t>(uniform_int(rng, 0, blocks - 1))];
  Quantifier q = p.first ? *p.first : (coin(rng) ? Quantifier::Exists : Quantifier::Forall);
  std::vector<QuantifierBlock> prefix;
  std::vector<std::string> names;
  int next = 0;
  for (int b = 0; b < blocks; ++b) {
    QuantifierBlock block{q, {}};
    for (int j = 0; j < sizes[static_cast<std::size_t>(b)]; ++j) {
      block.vars.push_back("v" + std::to_string(next++));
      names.push_back(block.vars.back());
    }
    prefix.push_back(std::move(block));
    q = opposite(q);
  }
  const int apps = uniform_int(rng, p.min_apps, std::max(p.min_apps, p.max_apps));
  std::vector<ConstraintApplication> matrix;
  for (int a = 0; a < apps; ++a) {
    const auto& c = pool[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(pool.size()) - 1))];
    std::vector<Argument> args;
    for (int i = 0; i < c->arity(); ++i) {
      if (names.empty() || coin(rng, p.constant_prob)) {
        args.push_back(Argument::constant(coin(rng)));
      } else {
        args.push_back(Argument::variable(names[static_cast<std::size_t>(uniform_int(rng, 0, n - 1))]));
      }
    }
    matrix.emplace_back(c, std::move(args));
  }
  return QuantifiedExpression(std::move(prefix), std::move(matrix));
}

/// Draws `count` distinct members of `pool` (or all of it if smaller).
inline std::vector<ConstraintRef> sample_constraints(Rng& rng, const std::vector<ConstraintRef>& pool, int count) {
  std::vector<ConstraintRef> copy = pool;
  std::shuffle(copy.begin(), copy.end(), rng);
  if (static_cast<int>(copy.size()) > count) copy.resize(static_cast<std::size_t>(count));
  return copy;
}

}  // namespace qcsp
