#ifndef CORRTHERM_ERRORS_HPP
#define CORRTHERM_ERRORS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace corrtherm {

// Base of all library errors. Two families map onto the CLI exit codes:
// InputError -> 1 (bad input or violated invariant), NumericError -> 2
// (a computation failed to converge or lost consistency).
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class InputError : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

class EmptyRow : public InputError {
 public:
  explicit EmptyRow(int row)
      : InputError("EmptyRow(" + std::to_string(row) +
                   "): state has no image, not a correspondence"),
        row(row) {}
  int row;
};

class NotSurjective : public InputError {
 public:
  explicit NotSurjective(int column)
      : InputError("NotSurjective(" + std::to_string(column) +
                   "): column is empty, inverse undefined"),
        column(column) {}
  int column;
};

class IndexOutOfRange : public InputError {
 public:
  IndexOutOfRange(int index, int bound)
      : InputError("IndexOutOfRange(" + std::to_string(index) + "): valid range is [0," +
                   std::to_string(bound) + ")") {}
};

class BudgetExceeded : public InputError {
 public:
  explicit BudgetExceeded(const std::string& count)
      : InputError("BudgetExceeded(" + count + "): enumeration exceeds the configured cap") {}
};

class Overflow : public NumericError {
 public:
  Overflow() : NumericError("Overflow: count exceeds 128-bit range") {}
};

class DisallowedEdge : public InputError {
 public:
  DisallowedEdge(int from, int to)
      : InputError("DisallowedEdge(" + std::to_string(from) + "," + std::to_string(to) +
                   "): edge is not in the correspondence") {}
};

class DimensionMismatch : public InputError {
 public:
  DimensionMismatch(std::size_t got, std::size_t want)
      : InputError("DimensionMismatch: got " + std::to_string(got) + ", want " +
                   std::to_string(want)) {}
};

class NoConvergence : public NumericError {
 public:
  explicit NoConvergence(int max_iterations, const std::string& where = "")
      : NumericError("NoConvergence(" + std::to_string(max_iterations) + ")" +
                     (where.empty() ? "" : ": " + where)) {}
};

class NotStationary : public InputError {
 public:
  explicit NotStationary(double residual)
      : NotStationary(residual, 1e-8) {}
  NotStationary(double residual, double tol)
      : InputError("NotStationary: ||pP-p||_inf = " + std::to_string(residual) +
                   " exceeds " + std::to_string(tol)) {}
};

class SupportViolation : public InputError {
 public:
  SupportViolation(int from, int to)
      : InputError("SupportViolation(" + std::to_string(from) + "," + std::to_string(to) +
                   "): nonzero mass outside the support adjacency") {}
};

class InsufficientData : public InputError {
 public:
  InsufficientData(std::uint64_t blocks, std::uint64_t needed)
      : InputError("InsufficientData: " + std::to_string(blocks) + " blocks, need " +
                   std::to_string(needed)) {}
};

class GridMismatch : public InputError {
 public:
  GridMismatch() : InputError("GridMismatch: grids differ in bounds or resolution") {}
};

class NotPrimitive : public InputError {
 public:
  NotPrimitive() : InputError("NotPrimitive: adjacency is not primitive") {}
};

class DegenerateEigenvector : public NumericError {
 public:
  DegenerateEigenvector()
      : NumericError("DegenerateEigenvector: all eigenvector entries below threshold") {}
};

class ParseError : public InputError {
 public:
  ParseError(int line, const std::string& reason)
      : InputError("ParseError(line " + std::to_string(line) + "): " + reason), line(line) {}
  int line;
};

class ValidationError : public InputError {
 public:
  using InputError::InputError;
};

}  // namespace corrtherm

#endif
