// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace qubo {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Configuration/spin length does not match the model size.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A spin value other than +1/-1 was supplied.
class InvalidSpinError : public Error {
 public:
  using Error::Error;
};

/// Problem size outside the supported range for the requested operation.
class SizeError : public Error {
 public:
  using Error::Error;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

/// Rejection sampling ran out of attempts.
class GenerationError : public Error {
 public:
  GenerationError(const std::string& what, std::uint64_t attempts)
      : Error(what), attempts(attempts) {}
  std::uint64_t attempts;
};

/// Spectra with different capacities cannot be merged.
class MergeError : public Error {
 public:
  using Error::Error;
};

/// Enumeration refused: problem exceeds the resource guard.
class ResourceGuardError : public Error {
 public:
  using Error::Error;
};

/// Cooperative stop signal was raised during a solve.
class CancelledError : public Error {
 public:
  using Error::Error;
};

/// Not enough states/points for the requested analysis.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

/// Regression could not be performed on the usable points.
class FitError : public Error {
 public:
  FitError(const std::string& what, std::size_t usable_points)
      : Error(what), usable_points(usable_points) {}
  std::size_t usable_points;
};

/// Malformed input file; `line` is 1-based where applicable.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line(line) {}
  std::size_t line;
};

}  // namespace qubo
