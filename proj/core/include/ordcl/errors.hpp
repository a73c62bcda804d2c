#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ordcl {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite input to a link function.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Rank-deficient design; `column()` is the first column found to be dependent.
class IdentifiabilityError : public Error {
 public:
  IdentifiabilityError(const std::string& what, int column)
      : Error(what), column_(column) {}
  int column() const noexcept { return column_; }

 private:
  int column_;
};

/// Parameter vector gives non-increasing linear predictors at some row.
class InvalidParameterError : public Error {
 public:
  InvalidParameterError(const std::string& what, int row, int category)
      : Error(what), row_(row), category_(category) {}
  int row() const noexcept { return row_; }
  int category() const noexcept { return category_; }

 private:
  int row_;
  int category_;
};

/// Singular or ill-conditioned linear algebra. `row()` is -1 when the failure
/// is not attributable to a single data row.
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what, int row = -1)
      : Error(what), row_(row) {}
  int row() const noexcept { return row_; }

 private:
  int row_;
};

/// Information matrix not invertible where a test statistic needs it.
class SingularInformationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& what, std::vector<double> trace)
      : Error(what), trace_(std::move(trace)) {}
  const std::vector<double>& trace() const noexcept { return trace_; }

 private:
  std::vector<double> trace_;
};

/// The bias-corrected estimator does not exist when the ML fit is on the
/// boundary of the parameter space.
class UndefinedEstimatorError : public Error {
 public:
  using Error::Error;
};

class DegenerateDataError : public Error {
 public:
  using Error::Error;
};

}  // namespace ordcl
