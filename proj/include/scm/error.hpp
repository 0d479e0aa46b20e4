#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace scm {

// Error categories map onto CLI exit codes: config/data -> 1,
// solver non-convergence -> 2, filesystem -> 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad function arguments (contract violations by the caller).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Malformed or semantically invalid configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed input data: parse failures, coverage gaps, invalid values.
class DataError : public Error {
 public:
  using Error::Error;
};

// Read/write failures on the filesystem.
class IoError : public Error {
 public:
  using Error::Error;
};

// Solver failed to reach the requested tolerances; carries the best iterate
// found so the caller can inspect how close it got.
class SolverError : public Error {
 public:
  SolverError(const std::string& message, std::vector<double> best_weights,
              double kkt_residual, int iterations)
      : Error(message),
        best_weights(std::move(best_weights)),
        kkt_residual(kkt_residual),
        iterations(iterations) {}

  std::vector<double> best_weights;
  double kkt_residual = 0.0;
  int iterations = 0;
};

}  // namespace scm
