#pragma once

#include <stdexcept>
#include <string>

namespace sctl {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The model misbehaved at search time (e.g. an assignment left its range).
class ModelError : public Error {
 public:
  using Error::Error;
};

/// A limit was hit: step budget, state-space bound.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Malformed user input that is not a parse error: unknown predicate,
/// arity mismatch, free variables where a closed formula is required.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A recorded trace does not replay against the model and formula.
class TraceMismatch : public Error {
 public:
  using Error::Error;
};

/// An API precondition was violated by the caller.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace sctl
