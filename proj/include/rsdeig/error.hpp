#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace rsdeig {

enum class ErrorCode {
  DimensionMismatch,
  NotSpd,
  NotSpdInLowPrecision,
  MaxIterations,
  BreakdownNonSpd,
  InnerProductNotPositive,
  NoConvergence,
  ZeroVector,
  NotTangent,
  AntipodalOrEqual,
  InvalidMeshWidth,
  MisalignedOverlap,
  EmptySubdomain,
  DegenerateSmallestEigenvalue,
  StepCapViolated,
  OutsideBasin,
  ZeroGradientAtNonEigenvector,
  InvalidC,
  InvalidArgument,
  ParseError,
  UnknownTable,
  PropertyViolation,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Non-positive pivot in a Cholesky factorization.
class NotSpdError : public Error {
 public:
  NotSpdError(ErrorCode code, std::size_t pivot, double value);
  std::size_t pivot() const noexcept { return pivot_; }
  double pivot_value() const noexcept { return value_; }

 private:
  std::size_t pivot_;
  double value_;
};

// Iteration cap hit; keeps the best iterate seen so far.
class MaxIterationsError : public Error {
 public:
  MaxIterationsError(const std::string& what, std::vector<double> best, std::size_t iterations)
      : Error(ErrorCode::MaxIterations, what), best_(std::move(best)), iterations_(iterations) {}

  const std::vector<double>& best() const noexcept { return best_; }
  std::size_t iterations() const noexcept { return iterations_; }

 private:
  std::vector<double> best_;
  std::size_t iterations_;
};

}  // namespace rsdeig
