#pragma once

#include <stdexcept>
#include <string>

namespace twinex {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input files or configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A call outside an operation's contract (wrong light kind, unnormalized
/// density matrix, ...).
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Inputs that make a quantity undefined: coincident sites, vanishing
/// denominators, zero-trace normalization, non-Hermitian Hamiltonians.
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

/// Parameter grids that leave the physical domain (e.g. omega1 <= 0).
class DomainError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double coarse, double fine)
      : Error(what), coarse_(coarse), fine_(fine) {}
  double coarse() const { return coarse_; }
  double fine() const { return fine_; }

 private:
  double coarse_;
  double fine_;
};

}  // namespace twinex
