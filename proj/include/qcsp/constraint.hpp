#pragma once

// Boolean constraints given extensionally by their truth table, and
// applications of a constraint to variables and the constants 0/1.
//
// Row convention: row r of a k-ary table holds the value on the assignment
// whose bits encode r with the FIRST argument as the MOST significant bit.
// For OR2 the table "0111" therefore reads OR2(0,0)=0, OR2(0,1)=1,
// OR2(1,0)=1, OR2(1,1)=1.

#include <bit>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qcsp/error.hpp"

namespace qcsp {

inline constexpr int kMaxArity = 16;

class Constraint {
 public:
  /// `bits` is a string of 2^arity '0'/'1' characters, row 0 first.
  Constraint(std::string name, int arity, std::string_view bits) : name_(std::move(name)), arity_(arity) {
    check_arity(arity);
    if (bits.size() != (std::size_t{1} << arity)) {
      throw InvalidArgument("constraint '" + name_ + "': table has " + std::to_string(bits.size()) +
                            " entries, arity " + std::to_string(arity) + " needs " +
                            std::to_string(std::size_t{1} << arity));
    }
    table_.assign(words(), 0);
    for (std::size_t r = 0; r < bits.size(); ++r) {
      if (bits[r] == '1') {
        table_[r / 64] |= std::uint64_t{1} << (r % 64);
      } else if (bits[r] != '0') {
        throw InvalidArgument("constraint '" + name_ + "': table may only contain 0 and 1");
      }
    }
  }

  Constraint(std::string name, int arity, const std::vector<bool>& values)
      : Constraint(std::move(name), arity, to_bits(values)) {}

  const std::string& name() const noexcept { return name_; }
  int arity() const noexcept { return arity_; }
  std::uint32_t rows() const noexcept { return std::uint32_t{1} << arity_; }

  bool value(std::uint32_t row) const noexcept { return (table_[row / 64] >> (row % 64)) & 1U; }
  bool operator()(std::uint32_t row) const noexcept { return value(row); }

  std::string bits() const {
    std::string out(rows(), '0');
    for (std::uint32_t r = 0; r < rows(); ++r) {
      if (value(r)) out[r] = '1';
    }
    return out;
  }

  std::vector<std::uint32_t> satisfying_rows() const {
    std::vector<std::uint32_t> out;
    for (std::uint32_t r = 0; r < rows(); ++r) {
      if (value(r)) out.push_back(r);
    }
    return out;
  }

  std::uint32_t count() const noexcept {
    std::uint32_t n = 0;
    for (auto w : table_) n += static_cast<std::uint32_t>(std::popcount(w));
    return n;
  }

  bool is_constant_false() const noexcept { return count() == 0; }
  bool is_constant_true() const noexcept { return count() == rows(); }

  /// Same Boolean function, ignoring the name.
  bool same_function(const Constraint& other) const noexcept {
    return arity_ == other.arity_ && table_ == other.table_;
  }

  /// Constraint of the same arity with a different name.
  Constraint renamed(std::string name) const {
    Constraint c = *this;
    c.name_ = std::move(name);
    return c;
  }

  friend bool operator==(const Constraint& a, const Constraint& b) noexcept {
    return a.name_ == b.name_ && a.same_function(b);
  }

 private:
  static void check_arity(int arity) {
    if (arity < 1) throw InvalidArgument("constraint arity must be at least 1");
    if (arity > kMaxArity) {
      throw InvalidArgument("constraint arity " + std::to_string(arity) + " exceeds the maximum of " +
                            std::to_string(kMaxArity));
    }
  }
  static std::string to_bits(const std::vector<bool>& values) {
    std::string s;
    s.reserve(values.size());
    for (bool v : values) s.push_back(v ? '1' : '0');
    return s;
  }
  std::size_t words() const noexcept { return (rows() + 63) / 64; }

  std::string name_;
  int arity_;
  std::vector<std::uint64_t> table_;
};

using ConstraintRef = std::shared_ptr<const Constraint>;

inline ConstraintRef make_constraint(std::string name, int arity, std::string_view bits) {
  return std::make_shared<const Constraint>(std::move(name), arity, bits);
}

/// Builds a constraint by evaluating `fn` on every row; fn receives the
/// argument values in argument order.
template <typename Fn>
ConstraintRef constraint_from_function(std::string name, int arity, Fn&& fn) {
  if (arity < 1 || arity > kMaxArity) throw InvalidArgument("constraint arity out of range");
  std::vector<bool> values(std::size_t{1} << arity);
  std::vector<bool> args(static_cast<std::size_t>(arity));
  for (std::uint32_t r = 0; r < values.size(); ++r) {
    for (int i = 0; i < arity; ++i) args[static_cast<std::size_t>(i)] = (r >> (arity - 1 - i)) & 1U;
    values[r] = static_cast<bool>(fn(args));
  }
  return std::make_shared<const Constraint>(std::move(name), arity, values);
}

/// Bit of argument `index` (0-based) inside a row of a k-ary table.
inline bool row_bit(std::uint32_t row, int arity, int index) noexcept {
  return (row >> (arity - 1 - index)) & 1U;
}

/// Row whose every argument bit is flipped.
inline std::uint32_t complement_row(std::uint32_t row, int arity) noexcept {
  return ~row & ((std::uint32_t{1} << arity) - 1);
}

/// Identity of constraints inside sets: same name and same function.
inline bool same_constraint(const ConstraintRef& a, const ConstraintRef& b) noexcept {
  return a == b || (a && b && *a == *b);
}

class Argument {
 public:
  static Argument variable(std::string name) {
    if (name.empty()) throw InvalidArgument("variable name must not be empty");
    return Argument(std::move(name));
  }
  static Argument constant(bool value) { return Argument(value); }

  bool is_constant() const noexcept { return std::holds_alternative<bool>(value_); }
  bool is_variable() const noexcept { return !is_constant(); }
  bool constant_value() const { return std::get<bool>(value_); }
  const std::string& name() const { return std::get<std::string>(value_); }

  friend bool operator==(const Argument&, const Argument&) = default;

 private:
  explicit Argument(std::string name) : value_(std::move(name)) {}
  explicit Argument(bool value) : value_(value) {}

  std::variant<std::string, bool> value_;
};

inline Argument var(std::string name) { return Argument::variable(std::move(name)); }
inline Argument cst(bool value) { return Argument::constant(value); }

using Assignment = std::map<std::string, bool, std::less<>>;

class ConstraintApplication {
 public:
  ConstraintApplication(ConstraintRef constraint, std::vector<Argument> args)
      : constraint_(std::move(constraint)), args_(std::move(args)) {
    if (!constraint_) throw InvalidArgument("constraint application without a constraint");
    if (static_cast<int>(args_.size()) != constraint_->arity()) {
      throw InvalidArgument("constraint '" + constraint_->name() + "' has arity " +
                            std::to_string(constraint_->arity()) + " but was applied to " +
                            std::to_string(args_.size()) + " arguments");
    }
  }

  const ConstraintRef& constraint() const noexcept { return constraint_; }
  const std::vector<Argument>& args() const noexcept { return args_; }

  bool has_constants() const noexcept {
    for (const auto& a : args_) {
      if (a.is_constant()) return true;
    }
    return false;
  }

  friend bool operator==(const ConstraintApplication& a, const ConstraintApplication& b) {
    return same_constraint(a.constraint_, b.constraint_) && a.args_ == b.args_;
  }

 private:
  ConstraintRef constraint_;
  std::vector<Argument> args_;
};

inline bool evaluate_application(const ConstraintApplication& app, const Assignment& assignment) {
  const int k = app.constraint()->arity();
  std::uint32_t row = 0;
  for (int i = 0; i < k; ++i) {
    const Argument& a = app.args()[static_cast<std::size_t>(i)];
    bool bit;
    if (a.is_constant()) {
      bit = a.constant_value();
    } else {
      auto it = assignment.find(a.name());
      if (it == assignment.end()) throw UnboundVariable(a.name());
      bit = it->second;
    }
    row = (row << 1) | static_cast<std::uint32_t>(bit);
  }
  return app.constraint()->value(row);
}

}  // namespace qcsp
