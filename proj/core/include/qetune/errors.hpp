#pragma once

#include <stdexcept>
#include <string>

namespace qetune {

/// Malformed input text; carries the 1-based line number where parsing failed.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line)
      : std::runtime_error("line " + std::to_string(line) + ": " + msg),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// Requested problem size exceeds what dense desk-scale routines support.
class CapacityError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A sampling operation would exceed the shot cap. Raised before any
/// sampling happens; the budget is left untouched.
class BudgetError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Inconsistent vector/feature dimensions between data and model.
class ShapeError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace qetune
