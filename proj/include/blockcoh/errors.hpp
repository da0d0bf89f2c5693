#pragma once

#include <stdexcept>
#include <string>

namespace blockcoh {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shape mismatch, empty operand or a size that would overflow.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Numerically rank-deficient input where full rank is required.
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

/// A frame, recipe or construction failed a structural check.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Malformed frame file, Kerdock set file or manifest.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// An iterative routine did not reach its tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace blockcoh
