#pragma once

#include <stdexcept>
#include <string>

namespace specbound {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Non-conformable shapes, bad index ranges, dimension-order violations.
class DimensionError : public Error {
public:
  using Error::Error;
};

/// A matrix required to have full rank (or to be safely invertible) is not.
/// Carries the offending singular-value ratio in the message.
class RankDeficiencyError : public Error {
public:
  using Error::Error;
};

/// An iterative scheme exceeded its sweep limit. Signals a bug, not bad input.
class ConvergenceError : public Error {
public:
  using Error::Error;
};

/// Scalar-level domain violations: gap conditions, degenerate intervals,
/// negative entries where nonnegative tuples are required, zero denominators.
class NumericDomainError : public Error {
public:
  using Error::Error;
};

/// Invalid experiment configuration or config-file contents.
class ConfigError : public Error {
public:
  using Error::Error;
};

/// File I/O failures while emitting results.
class IoError : public Error {
public:
  using Error::Error;
};

}  // namespace specbound
