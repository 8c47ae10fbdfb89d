#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace toasync {

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  SingularTriangular,
  InvalidRange,
  ParallelBearings,
  DegenerateGeometry,
  GeometryIllConditioned,
  SingularFim,
  NotAvailable,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Zero or near-zero pivot hit during back-substitution; carries the index of
// the offending diagonal entry.
class SingularTriangularError : public Error {
 public:
  SingularTriangularError(std::size_t index, std::string message)
      : Error(ErrorCode::SingularTriangular, std::move(message)), index_(index) {}

  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

// Rank-deficient Fisher information; carries the 1-based step index at which
// the deficiency was detected.
class SingularFimError : public Error {
 public:
  SingularFimError(std::size_t step, std::string message)
      : Error(ErrorCode::SingularFim, std::move(message)), step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

}  // namespace toasync
