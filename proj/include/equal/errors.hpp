#pragma once

#include <stdexcept>
#include <string>

namespace equal {

// Bad arguments, shape mismatches, size guards.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Factorization failures, divergent iterates, non-finite values.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace equal
