#pragma once

#include <stdexcept>
#include <string>

namespace gyni {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Vectors or matrices with incompatible dimensions.
class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& what) : Error(what) {}
};

/// An enumeration would exceed the configured cap. Carries the cap that
/// would have been required to proceed.
class EnumerationCapError : public Error {
 public:
  EnumerationCapError(const std::string& what, long required)
      : Error(what + " (required cap: " + std::to_string(required) + ")"),
        required_cap(required) {}
  long required_cap;
};

/// The linear program has no feasible point.
class LpInfeasibleError : public Error {
 public:
  explicit LpInfeasibleError(const std::string& what = "infeasible") : Error(what) {}
};

/// The linear program is unbounded in the maximization direction.
class LpUnboundedError : public Error {
 public:
  explicit LpUnboundedError(const std::string& what = "unbounded") : Error(what) {}
};

/// Two objects built for different scenarios were combined.
class ScenarioMismatchError : public Error {
 public:
  explicit ScenarioMismatchError(const std::string& what) : Error(what) {}
};

/// A product in the projector algebra left the verified fragment
/// (it would require a word of length three).
class AlgebraWordError : public Error {
 public:
  explicit AlgebraWordError(const std::string& what) : Error(what) {}
};

/// Malformed textual input (rational strings, JSON payloads).
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(what) {}
};

}  // namespace gyni
