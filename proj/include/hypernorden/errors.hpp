#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hypernorden {

/// Base class for all engine errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Linear solve hit a pivot below the singularity threshold.
struct SingularMatrixError : Error {
  using Error::Error;
};

/// Input outside the mathematical domain of an operation.
struct DomainError : Error {
  using Error::Error;
};

/// Expression evaluation left the domain of a function (log, sqrt, division)
/// or produced a non-finite value.
struct EvaluationDomainError : Error {
  EvaluationDomainError(const std::string& what, std::string fragment_in,
                        std::size_t offset_in)
      : Error(what), fragment(std::move(fragment_in)), offset(offset_in) {}
  explicit EvaluationDomainError(const std::string& what)
      : Error(what), offset(0) {}

  std::string fragment;  // printed form of the offending subexpression
  std::size_t offset;    // byte offset into the source text, 0 if unknown
};

/// Malformed expression text.
struct SyntaxError : Error {
  SyntaxError(const std::string& what, std::size_t offset_in)
      : Error(what), offset(offset_in) {}
  std::size_t offset;
};

/// Unknown function name or out-of-range variable.
struct UnknownIdentifierError : Error {
  UnknownIdentifierError(const std::string& what, std::size_t offset_in)
      : Error(what), offset(offset_in) {}
  std::size_t offset;
};

/// Metric not invertible at a queried chart point.
struct SingularMetricError : Error {
  using Error::Error;
};

/// Metric invertible but of the wrong signature.
struct SignatureViolationError : Error {
  using Error::Error;
};

/// Induced metric on a submanifold is degenerate or of the wrong signature.
struct DegenerateInducedMetricError : Error {
  using Error::Error;
};

/// Immersion Jacobian does not have full rank.
struct RankDeficientImmersionError : Error {
  using Error::Error;
};

/// Scenario / configuration problem (bad key, unknown check name, ...).
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace hypernorden
