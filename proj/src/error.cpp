#include "mdd/error.hpp"

namespace mdd {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonFinitePoint: return "NonFinitePoint";
    case ErrorCode::NotUnitNorm: return "NotUnitNorm";
    case ErrorCode::DegenerateShape: return "DegenerateShape";
    case ErrorCode::AsymmetricMatrix: return "AsymmetricMatrix";
    case ErrorCode::NegativeDistance: return "NegativeDistance";
    case ErrorCode::NonzeroDiagonal: return "NonzeroDiagonal";
    case ErrorCode::NonFiniteEntry: return "NonFiniteEntry";
    case ErrorCode::SizeMismatch: return "SizeMismatch";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::InvalidLabels: return "InvalidLabels";
    case ErrorCode::InvalidB: return "InvalidB";
    case ErrorCode::InvalidReps: return "InvalidReps";
    case ErrorCode::InvalidR: return "InvalidR";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::InvalidGrid: return "InvalidGrid";
    case ErrorCode::OutOfRangePValue: return "OutOfRangePValue";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

bool is_domain_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonFinitePoint:
    case ErrorCode::NotUnitNorm:
    case ErrorCode::DegenerateShape:
    case ErrorCode::AsymmetricMatrix:
    case ErrorCode::NegativeDistance:
    case ErrorCode::NonzeroDiagonal:
    case ErrorCode::NonFiniteEntry:
      return true;
    default:
      return false;
  }
}

}  // namespace mdd
