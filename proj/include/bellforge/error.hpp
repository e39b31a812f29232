#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace bellforge {

/// Base of every exception thrown by the library. `kind()` is the stable,
/// machine-readable tag the CLI puts into its error JSON.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "error"; }
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "invalid_argument"; }
};

class ScenarioMismatch : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "scenario_mismatch"; }
};

class DimensionError : public Error {
 public:
  DimensionError(const std::string& what, std::int64_t required = 0)
      : Error(what), required_(required) {}
  const char* kind() const noexcept override { return "dimension"; }
  std::int64_t required() const noexcept { return required_; }

 private:
  std::int64_t required_;
};

/// Raised when an exact enumeration would exceed its evaluation budget.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& what, double required, double budget)
      : Error(what), required_(required), budget_(budget) {}
  const char* kind() const noexcept override { return "budget_exceeded"; }
  double required() const noexcept { return required_; }
  double budget() const noexcept { return budget_; }

 private:
  double required_;
  double budget_;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  const char* kind() const noexcept override { return "non_convergence"; }
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// A POVM element failed positivity; carries the offending eigenvalue.
class InvalidPovm : public Error {
 public:
  InvalidPovm(const std::string& what, double witness)
      : Error(what), witness_(witness) {}
  const char* kind() const noexcept override { return "invalid_povm"; }
  double witness() const noexcept { return witness_; }

 private:
  double witness_;
};

class ProvenanceMismatch : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "provenance_mismatch"; }
};

class UndefinedRatio : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "undefined_ratio"; }
};

class PositivityError : public Error {
 public:
  PositivityError(const std::string& what, double witness)
      : Error(what), witness_(witness) {}
  const char* kind() const noexcept override { return "positivity"; }
  double witness() const noexcept { return witness_; }

 private:
  double witness_;
};

class SchemaError : public Error {
 public:
  SchemaError(const std::string& what, std::string path)
      : Error(what + " (at " + path + ")"), path_(std::move(path)) {}
  const char* kind() const noexcept override { return "schema"; }
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace bellforge
