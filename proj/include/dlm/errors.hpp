#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dlm {

// Base class for every error raised by the library. `kind()` is a stable
// identifier that the CLI prints verbatim.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what) : Error("InvalidArgument", what) {}
};

class GraphError : public Error {
 public:
  explicit GraphError(const std::string& what) : Error("GraphError", what) {}
};

// Violations found while validating a user-supplied weight matrix.
class WeightMatrixError : public Error {
 public:
  enum class Kind { RowSumViolation, ColSumViolation, ZeroDiagonal, SparsityMismatch, Shape };

  WeightMatrixError(Kind kind, std::size_t row, std::size_t col, const std::string& what)
      : Error(kind_name(kind), what), violation_(kind), row_(row), col_(col) {}

  Kind violation() const noexcept { return violation_; }
  std::size_t row() const noexcept { return row_; }
  std::size_t col() const noexcept { return col_; }

  static const char* kind_name(Kind k) {
    switch (k) {
      case Kind::RowSumViolation: return "RowSumViolation";
      case Kind::ColSumViolation: return "ColSumViolation";
      case Kind::ZeroDiagonal: return "ZeroDiagonal";
      case Kind::SparsityMismatch: return "SparsityMismatch";
      case Kind::Shape: return "ShapeMismatch";
    }
    return "WeightMatrixError";
  }

 private:
  Kind violation_;
  std::size_t row_;
  std::size_t col_;
};

class ConvergenceError : public Error {
 public:
  explicit ConvergenceError(const std::string& what) : Error("ConvergenceError", what) {}
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& reason)
      : Error("ParseError", "line " + std::to_string(line) + ": " + reason), line_(line), reason_(reason) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::size_t line_;
  std::string reason_;
};

class FeasibilityError : public Error {
 public:
  explicit FeasibilityError(const std::string& what) : Error("FeasibilityError", what) {}
};

class InfeasibleTotal : public Error {
 public:
  explicit InfeasibleTotal(const std::string& what) : Error("InfeasibleTotal", what) {}
};

class BracketFailure : public Error {
 public:
  explicit BracketFailure(const std::string& what) : Error("BracketFailure", what) {}
};

class HypothesisViolation : public Error {
 public:
  explicit HypothesisViolation(const std::string& what) : Error("HypothesisViolation", what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error("IoError", what) {}
};

}  // namespace dlm
