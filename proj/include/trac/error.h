#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace trac {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SourcePosition {
  std::size_t line = 1;
  std::size_t column = 1;

  std::string str() const {
    return std::to_string(line) + ":" + std::to_string(column);
  }
};

// Any rejection of domain text. Always carries the offending position.
class ParseError : public Error {
 public:
  ParseError(SourcePosition pos, const std::string& message)
      : Error(pos.str() + ": " + message), pos_(pos) {}

  SourcePosition position() const { return pos_; }

 private:
  SourcePosition pos_;
};

// An operation was called outside its precondition (e.g. apply on an
// inapplicable action).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A search or enumeration hit its state/node budget before finishing.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

// A generator could not produce what was asked within its sampling budget.
class YieldFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace trac
