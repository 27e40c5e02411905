#pragma once

#include <stdexcept>
#include <string>

namespace gibbs {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A point fell outside the domain of a basis (beyond the clamping tolerance).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Dimensions or variants of the inputs do not fit together.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition was violated (empty data, bad index, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A linear system is singular or too badly conditioned to trust.
class ConditioningError : public Error {
 public:
  using Error::Error;
};

/// An estimate came out degenerate (nonpositive variance proxy, truncation
/// with vanishing acceptance, overflow in an exponential moment).
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// No starting point with finite posterior density could be found.
class InitializationError : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent user configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace gibbs
