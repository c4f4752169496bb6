#pragma once

#include <stdexcept>
#include <string>

namespace monrank {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands of mismatched length or shape.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Malformed textual input (CSV, sign-vector files, permutation lists).
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Tied entries where distinct ones are required.
class GenericityError : public Error {
 public:
  using Error::Error;
};

/// Argument outside an operation's domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Point or vector configuration not in general position.
class GeneralPositionError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A size guard was exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Index outside the ground set.
class IndexError : public Error {
 public:
  using Error::Error;
};

}  // namespace monrank
