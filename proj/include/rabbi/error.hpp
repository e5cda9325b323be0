#pragma once

#include <stdexcept>
#include <string>

namespace rabbi {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: inconsistent dimensions, non-finite entries, unsorted menus.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// An exact oracle refused to run because the instance exceeds its size guard.
class ScaleGuardError : public Error {
 public:
  using Error::Error;
};

}  // namespace rabbi
