#pragma once

#include <stdexcept>
#include <string>

namespace qbgk {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid user input: non-positive mass, unknown scenario, CFL violation, ...
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of a formula.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Newton iteration failed (singular Hessian, no convergence).
class SolverError : public Error {
 public:
  SolverError(const std::string& what, double residual = -1.0)
      : Error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// Iterate left the feasible set of the dual problem (boson exponent >= 0
/// somewhere on the grid) and step halving could not recover it.
class FeasibilityError : public SolverError {
 public:
  using SolverError::SolverError;
};

/// Fermion density target at or above what the finite grid can hold.
class SaturationError : public SolverError {
 public:
  using SolverError::SolverError;
};

/// A runtime invariant check (positivity, fermion bound, conservation) failed.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

/// Output file could not be written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace qbgk
