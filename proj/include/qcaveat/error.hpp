#pragma once

#include <stdexcept>
#include <string>

namespace qcaveat {

/// Base of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An input violates an operation's documented precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// An iterative routine failed to converge.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// A matrix is singular where an inverse is required.
class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

/// The eigenvalue filter removed every component of the right-hand side.
class EmptySolutionError : public Error {
 public:
  using Error::Error;
};

/// Postselection succeeded with vanishing probability.
class PostselectionError : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration or serialized input. `field` names the offending key.
class ParseError : public Error {
 public:
  ParseError(std::string field, const std::string& message)
      : Error(message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace qcaveat
