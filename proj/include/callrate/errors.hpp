#pragma once

#include <stdexcept>
#include <string>

namespace callrate {

// Malformed or inconsistent input data (CSV rows, month gaps, bad values).
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// A value was supplied on the wrong rate scale (percent vs unit interval,
// nominal vs continuously compounded).
class UnitsError : public std::runtime_error {
 public:
  explicit UnitsError(const std::string& msg) : std::runtime_error(msg) {}
};

// Estimation could not proceed (degenerate regressors, non-stationary
// estimates, recursion breakdown).
class EstimationError : public std::runtime_error {
 public:
  explicit EstimationError(const std::string& msg) : std::runtime_error(msg) {}
};

// A root/fixed-point problem has no solution for the given inputs.
class NoSolutionError : public std::runtime_error {
 public:
  explicit NoSolutionError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace callrate
