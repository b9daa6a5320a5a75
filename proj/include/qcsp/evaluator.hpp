#pragma once

// Brute-force truth evaluation of quantified expressions. Every other module
// is tested against this, so it stays deliberately simple: depth-first
// branching in prefix order, checking each application as soon as its last
// variable is assigned.

#include <cstdint>
#include <future>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "qcsp/expression.hpp"

namespace qcsp {

struct EvalBudget {
  std::size_t max_variables = 24;
  /// Maximum number of search nodes; exceeding it raises BudgetExceeded.
  std::optional<std::uint64_t> node_limit;
  /// Values above 1 evaluate the two branches of the outermost variable
  /// concurrently. Ignored when node_limit is set, so that the node count
  /// stays deterministic.
  unsigned threads = 1;
};

namespace detail {

struct CompiledApp {
  const Constraint* constraint;
  // Variable index, or -1 / -2 for the constants 0 / 1.
  std::vector<int> args;
};

class Evaluator {
 public:
  Evaluator(const QuantifiedExpression& expr, const EvalBudget& budget) : budget_(budget) {
    std::unordered_map<std::string, int> index;
    for (const auto& block : expr.prefix()) {
      for (const auto& v : block.vars) {
        index.emplace(v, static_cast<int>(quant_.size()));
        quant_.push_back(block.quantifier);
      }
    }
    checks_.resize(quant_.size() + 1);
    for (const auto& app : expr.matrix()) {
      CompiledApp c{app.constraint().get(), {}};
      int last = -1;
      for (const auto& a : app.args()) {
        if (a.is_constant()) {
          c.args.push_back(a.constant_value() ? -2 : -1);
        } else {
          const int v = index.at(a.name());
          c.args.push_back(v);
          last = std::max(last, v);
        }
      }
      // Slot 0 holds constant-only applications, slot v+1 those completed by variable v.
      checks_[static_cast<std::size_t>(last + 1)].push_back(std::move(c));
    }
  }

  bool run() {
    std::vector<std::uint8_t> values(quant_.size(), 0);
    if (!holds(0, values)) return false;
    if (quant_.empty()) return true;
    if (budget_.threads > 1 && !budget_.node_limit) {
      auto other = std::async(std::launch::async, [this, values]() mutable {
        Evaluator copy = *this;
        copy.nodes_ = 0;
        return copy.branch(0, 1, values);
      });
      const bool zero = branch(0, 0, values);
      const bool one = other.get();
      return quant_[0] == Quantifier::Exists ? (zero || one) : (zero && one);
    }
    return search(0, values);
  }

  std::uint64_t nodes() const noexcept { return nodes_; }

 private:
  bool holds(std::size_t slot, const std::vector<std::uint8_t>& values) const {
    for (const auto& c : checks_[slot]) {
      std::uint32_t row = 0;
      for (int a : c.args) {
        const std::uint32_t bit = a == -1 ? 0U : a == -2 ? 1U : values[static_cast<std::size_t>(a)];
        row = (row << 1) | bit;
      }
      if (!c.constraint->value(row)) return false;
    }
    return true;
  }

  bool branch(std::size_t v, std::uint8_t bit, std::vector<std::uint8_t>& values) {
    if (budget_.node_limit && ++nodes_ > *budget_.node_limit) {
      throw BudgetExceeded("evaluation exceeded the node limit of " + std::to_string(*budget_.node_limit));
    }
    values[v] = bit;
    if (!holds(v + 1, values)) return false;
    return v + 1 == quant_.size() || search(v + 1, values);
  }

  bool search(std::size_t v, std::vector<std::uint8_t>& values) {
    if (quant_[v] == Quantifier::Exists) return branch(v, 0, values) || branch(v, 1, values);
    return branch(v, 0, values) && branch(v, 1, values);
  }

  EvalBudget budget_;
  std::vector<Quantifier> quant_;
  std::vector<std::vector<CompiledApp>> checks_;
  std::uint64_t nodes_ = 0;
};

}  // namespace detail

/// Truth value of `expr`. Throws BudgetExceeded when the expression has more
/// than budget.max_variables variables or the node limit is hit.
inline bool eval(const QuantifiedExpression& expr, const EvalBudget& budget = {}) {
  if (budget.max_variables < 1) throw InvalidArgument("max_variables must be at least 1");
  const std::size_t n = expr.variable_count();
  if (n > budget.max_variables) {
    throw BudgetExceeded("expression has " + std::to_string(n) + " variables, budget allows " +
                         std::to_string(budget.max_variables));
  }
  detail::Evaluator e(expr, budget);
  return e.run();
}

/// Membership in QSAT_i: for odd i the Sigma_i expression is true, for even i
/// the Pi_i expression is false. Prefixes with missing trailing blocks are
/// accepted.
inline bool qsat_i_member(const QuantifiedExpression& expr, int i, const EvalBudget& budget = {}) {
  if (i < 1) throw InvalidArgument("level must be at least 1");
  const PrefixShape shape = prefix_shape(expr);
  if (!fits_level(shape, i)) {
    throw ShapeMismatch("expression of shape " + to_string(shape) + " is not a " + to_string(nominal_shape(i)) +
                        " expression");
  }
  const bool value = eval(expr, budget);
  return i % 2 == 1 ? value : !value;
}

}  // namespace qcsp
