#include "geomedian/error.hpp"

#include <sstream>

namespace geomedian {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::NonFiniteEntry: return "NonFiniteEntry";
    case ErrorCode::InvalidRho: return "InvalidRho";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::DidNotConverge: return "DidNotConverge";
    case ErrorCode::DegenerateRemainder: return "DegenerateRemainder";
    case ErrorCode::InvalidLevel: return "InvalidLevel";
    case ErrorCode::TooFewDraws: return "TooFewDraws";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ZeroScale: return "ZeroScale";
    case ErrorCode::InvalidAlpha: return "InvalidAlpha";
    case ErrorCode::ZeroVariance: return "ZeroVariance";
    case ErrorCode::InvalidDf: return "InvalidDf";
    case ErrorCode::PatternTooLarge: return "PatternTooLarge";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(message), code_(code) {}

namespace {

std::string non_finite_message(std::size_t row, std::size_t col) {
  std::ostringstream os;
  os << "non-finite entry at row " << row << ", column " << col;
  return os.str();
}

std::string convergence_message(int iterations, double grad_norm,
                                std::optional<std::size_t> replicate) {
  std::ostringstream os;
  os << "spatial median did not converge after " << iterations
     << " iterations (gradient norm " << grad_norm << ")";
  if (replicate) os << " in bootstrap replicate " << *replicate;
  return os.str();
}

}  // namespace

NonFiniteEntry::NonFiniteEntry(std::size_t row, std::size_t col)
    : Error(ErrorCode::NonFiniteEntry, non_finite_message(row, col)),
      row_(row),
      col_(col) {}

DidNotConverge::DidNotConverge(int iterations, double grad_norm,
                               std::optional<std::size_t> replicate)
    : Error(ErrorCode::DidNotConverge,
            convergence_message(iterations, grad_norm, replicate)),
      iterations_(iterations),
      grad_norm_(grad_norm),
      replicate_(replicate) {}

ZeroScale::ZeroScale(std::size_t coordinate)
    : Error(ErrorCode::ZeroScale,
            "zero scale estimate for coordinate " + std::to_string(coordinate)),
      coordinate_(coordinate) {}

}  // namespace geomedian
