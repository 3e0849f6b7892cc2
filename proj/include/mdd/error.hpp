#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mdd {

enum class ErrorCode {
  // metric / domain violations
  NonFinitePoint,
  NotUnitNorm,
  DegenerateShape,
  AsymmetricMatrix,
  NegativeDistance,
  NonzeroDiagonal,
  NonFiniteEntry,
  // malformed input or bad arguments
  SizeMismatch,
  IndexOutOfRange,
  InvalidLabels,
  InvalidB,
  InvalidReps,
  InvalidR,
  InvalidSpec,
  InvalidGrid,
  OutOfRangePValue,
  TooFewSamples,
  ParseError,
  IoError,
};

std::string_view to_string(ErrorCode code);

/// True for errors raised by a metric-space axiom or point-domain check, as
/// opposed to malformed input.
bool is_domain_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), detail_(what) {}

  ErrorCode code() const noexcept { return code_; }
  /// Message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace mdd
