#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace geomedian {

enum class ErrorCode {
  EmptyInput,
  NonFiniteEntry,
  InvalidRho,
  NotPSD,
  DidNotConverge,
  DegenerateRemainder,
  InvalidLevel,
  TooFewDraws,
  DimensionMismatch,
  ZeroScale,
  InvalidAlpha,
  ZeroVariance,
  InvalidDf,
  PatternTooLarge,
  InvalidArgument,
  ParseError,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Base exception for every failure raised by the library. `code()` is the
/// machine-readable kind; `what()` carries a human message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class NonFiniteEntry : public Error {
 public:
  NonFiniteEntry(std::size_t row, std::size_t col);

  std::size_t row() const noexcept { return row_; }
  std::size_t col() const noexcept { return col_; }

 private:
  std::size_t row_;
  std::size_t col_;
};

/// Raised when the spatial-median iteration exhausts its budget. Inside the
/// bootstrap the offending replicate index is attached.
class DidNotConverge : public Error {
 public:
  DidNotConverge(int iterations, double grad_norm,
                 std::optional<std::size_t> replicate = std::nullopt);

  int iterations() const noexcept { return iterations_; }
  double grad_norm() const noexcept { return grad_norm_; }
  std::optional<std::size_t> replicate() const noexcept { return replicate_; }

 private:
  int iterations_;
  double grad_norm_;
  std::optional<std::size_t> replicate_;
};

class ZeroScale : public Error {
 public:
  explicit ZeroScale(std::size_t coordinate);

  std::size_t coordinate() const noexcept { return coordinate_; }

 private:
  std::size_t coordinate_;
};

}  // namespace geomedian
