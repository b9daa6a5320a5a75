#pragma once

#include <stdexcept>
#include <string>

namespace qcsp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on a value (table length, arity, argument count, ...) was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// An expression violates well-formedness (free variable, repeated variable, ...).
class MalformedExpression : public Error {
 public:
  using Error::Error;
};

/// A variable was needed but not bound by the supplied assignment.
class UnboundVariable : public Error {
 public:
  explicit UnboundVariable(const std::string& name)
      : Error("unbound variable '" + name + "'"), name_(name) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

/// The brute-force evaluator refused or abandoned an instance. Never a truth value.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// The prefix of an expression does not have the shape an operation requires.
class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

/// A reduction was requested for a constraint set on the tractable side.
class NotApplicable : public Error {
 public:
  using Error::Error;
};

/// The bounded perfect-implementation search gave up on a helper constraint.
class ImplementationNotFound : public Error {
 public:
  using Error::Error;
};

}  // namespace qcsp
