#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "qcsp/constraint.hpp"

namespace qcsp {

enum class Quantifier { Exists, Forall };

inline Quantifier opposite(Quantifier q) noexcept {
  return q == Quantifier::Exists ? Quantifier::Forall : Quantifier::Exists;
}

struct QuantifierBlock {
  Quantifier quantifier = Quantifier::Exists;
  std::vector<std::string> vars;

  friend bool operator==(const QuantifierBlock&, const QuantifierBlock&) = default;
};

enum class Polarity { Sigma, Pi };

struct PrefixShape {
  Polarity polarity = Polarity::Sigma;
  int level = 0;

  friend bool operator==(const PrefixShape&, const PrefixShape&) = default;
};

inline std::string to_string(const PrefixShape& s) {
  return std::string(s.polarity == Polarity::Sigma ? "Sigma_" : "Pi_") + std::to_string(s.level);
}

/// Shape a QSAT_i instance has: Sigma_i for odd i, Pi_i for even i.
inline PrefixShape nominal_shape(int level) {
  return PrefixShape{level % 2 == 1 ? Polarity::Sigma : Polarity::Pi, level};
}

/// A closed, fully quantified set of constraint applications. Blocks are
/// nonempty and maximal; every matrix variable is bound by exactly one block.
class QuantifiedExpression {
 public:
  QuantifiedExpression() = default;

  QuantifiedExpression(std::vector<QuantifierBlock> prefix, std::vector<ConstraintApplication> matrix)
      : prefix_(std::move(prefix)), matrix_(std::move(matrix)) {
    validate();
  }

  /// Drops empty blocks and merges adjacent blocks with the same quantifier
  /// before validating. Used by transformations that grow blocks in place.
  static QuantifiedExpression normalized(std::vector<QuantifierBlock> prefix,
                                         std::vector<ConstraintApplication> matrix) {
    std::vector<QuantifierBlock> merged;
    for (auto& b : prefix) {
      if (b.vars.empty()) continue;
      if (!merged.empty() && merged.back().quantifier == b.quantifier) {
        auto& dst = merged.back().vars;
        dst.insert(dst.end(), b.vars.begin(), b.vars.end());
      } else {
        merged.push_back(std::move(b));
      }
    }
    return QuantifiedExpression(std::move(merged), std::move(matrix));
  }

  const std::vector<QuantifierBlock>& prefix() const noexcept { return prefix_; }
  const std::vector<ConstraintApplication>& matrix() const noexcept { return matrix_; }

  /// Variables in prefix order.
  std::vector<std::string> variables() const {
    std::vector<std::string> out;
    for (const auto& b : prefix_) out.insert(out.end(), b.vars.begin(), b.vars.end());
    return out;
  }

  std::size_t variable_count() const noexcept {
    std::size_t n = 0;
    for (const auto& b : prefix_) n += b.vars.size();
    return n;
  }

  bool binds(const std::string& name) const {
    for (const auto& b : prefix_) {
      if (std::find(b.vars.begin(), b.vars.end(), name) != b.vars.end()) return true;
    }
    return false;
  }

  /// Index of the block binding `name`, or -1.
  int block_of(const std::string& name) const {
    for (std::size_t i = 0; i < prefix_.size(); ++i) {
      const auto& vs = prefix_[i].vars;
      if (std::find(vs.begin(), vs.end(), name) != vs.end()) return static_cast<int>(i);
    }
    return -1;
  }

  bool has_constants() const noexcept {
    return std::any_of(matrix_.begin(), matrix_.end(), [](const auto& a) { return a.has_constants(); });
  }

  /// Distinct constraints of the matrix in order of first use.
  std::vector<ConstraintRef> constraints() const {
    std::vector<ConstraintRef> out;
    for (const auto& app : matrix_) {
      const auto& c = app.constraint();
      if (std::none_of(out.begin(), out.end(), [&](const auto& o) { return same_constraint(o, c); })) {
        out.push_back(c);
      }
    }
    return out;
  }

  friend bool operator==(const QuantifiedExpression&, const QuantifiedExpression&) = default;

 private:
  void validate() const {
    std::unordered_set<std::string> bound;
    for (std::size_t i = 0; i < prefix_.size(); ++i) {
      const auto& b = prefix_[i];
      if (b.vars.empty()) throw MalformedExpression("quantifier block " + std::to_string(i + 1) + " is empty");
      if (i > 0 && prefix_[i - 1].quantifier == b.quantifier) {
        throw MalformedExpression("adjacent quantifier blocks must alternate (blocks " + std::to_string(i) +
                                  " and " + std::to_string(i + 1) + ")");
      }
      for (const auto& v : b.vars) {
        if (v.empty()) throw MalformedExpression("empty variable name in prefix");
        if (!bound.insert(v).second) throw MalformedExpression("variable '" + v + "' is quantified twice");
      }
    }
    for (const auto& app : matrix_) {
      for (const auto& a : app.args()) {
        if (a.is_variable() && !bound.count(a.name())) {
          throw MalformedExpression("free variable '" + a.name() + "' in application of '" +
                                    app.constraint()->name() + "'");
        }
      }
    }
  }

  std::vector<QuantifierBlock> prefix_;
  std::vector<ConstraintApplication> matrix_;
};

inline PrefixShape prefix_shape(const QuantifiedExpression& expr) {
  const auto& p = expr.prefix();
  if (p.empty()) return PrefixShape{Polarity::Sigma, 0};
  return PrefixShape{p.front().quantifier == Quantifier::Exists ? Polarity::Sigma : Polarity::Pi,
                     static_cast<int>(p.size())};
}

/// True when `shape` is a (possibly truncated) prefix of the nominal shape of
/// level i: same polarity, no more blocks. The empty prefix fits every level.
inline bool fits_level(const PrefixShape& shape, int level) {
  if (shape.level == 0) return true;
  return shape.level <= level && shape.polarity == nominal_shape(level).polarity;
}

/// Applies `fn` to every argument of every application, keeping the prefix.
template <typename Fn>
std::vector<ConstraintApplication> map_arguments(const std::vector<ConstraintApplication>& matrix, Fn&& fn) {
  std::vector<ConstraintApplication> out;
  out.reserve(matrix.size());
  for (const auto& app : matrix) {
    std::vector<Argument> args;
    args.reserve(app.args().size());
    for (const auto& a : app.args()) args.push_back(fn(a));
    out.emplace_back(app.constraint(), std::move(args));
  }
  return out;
}

/// Picks names not in `taken`: `base`, then `base_1`, `base_2`, ... Each
/// returned name is added to `taken`.
class FreshNames {
 public:
  FreshNames() = default;
  explicit FreshNames(const QuantifiedExpression& expr) {
    for (const auto& v : expr.variables()) taken_.insert(v);
  }

  void reserve(const std::string& name) { taken_.insert(name); }

  std::string make(const std::string& base) {
    if (taken_.insert(base).second) return base;
    for (int i = 1;; ++i) {
      std::string candidate = base + "_" + std::to_string(i);
      if (taken_.insert(candidate).second) return candidate;
    }
  }

 private:
  std::unordered_set<std::string> taken_;
};

}  // namespace qcsp
