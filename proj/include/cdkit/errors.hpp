#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cdkit {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Invalid construction parameters (bad condition number, nonpositive
/// Jacobi diagonal, zero constant gamma, ...).
class SpecError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Iterative eigenvalue estimate failed to settle; carries what it had.
class EstimateError : public Error {
 public:
  EstimateError(const std::string& what, double lambda_min, double lambda_max)
      : Error(what), lambda_min_(lambda_min), lambda_max_(lambda_max) {}

  double partial_lambda_min() const noexcept { return lambda_min_; }
  double partial_lambda_max() const noexcept { return lambda_max_; }

 private:
  double lambda_min_;
  double lambda_max_;
};

/// A direction with p^T A p <= 0 showed up where positive curvature is required.
class CurvatureError : public Error {
 public:
  using Error::Error;
};

class IncompleteBasisError : public Error {
 public:
  using Error::Error;
};

/// The determinant formula needs exactly n steps; the run stopped earlier.
class NotFullRankTrajectory : public Error {
 public:
  using Error::Error;
};

class HistoryError : public Error {
 public:
  using Error::Error;
};

}  // namespace cdkit
