#pragma once

#include <stdexcept>
#include <string>

namespace abt {

/// Malformed input data (bad JSON, bad file). CLI maps this to exit code 2.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string msg, int line = -1, int column = -1)
      : std::runtime_error(std::move(msg)), line(line), column(column) {}
  int line;
  int column;
};

/// Structurally valid input that violates a semantic contract (unbalanced
/// masses, non-convex gauge for the solver, ...). CLI maps this to exit 3.
class SemanticError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Numerical degeneracy detected by a geometric routine.
class DegeneracyError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace abt
