#pragma once

#include <stdexcept>
#include <string>

namespace sparselab {

// Bad argument values or inconsistent dimensions.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Input violates a mathematical precondition of the operation (e.g. singular
// active block, non-normalized columns).
class PreconditionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Malformed CSV input; message carries row/column coordinates.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Combinatorial enumeration would exceed the configured cap.
class RefusalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Linear system has no solution (basis pursuit with Y outside the span).
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Iterative procedure failed to meet its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sparselab
