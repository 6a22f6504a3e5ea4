#pragma once

#include <stdexcept>
#include <string>

namespace gca {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid input data: malformed graphs, rules, assignments, configurations.
class ValidationError : public Error {
public:
  using Error::Error;
};

/// A file could not be read or written.
class IoError : public Error {
public:
  using Error::Error;
};

/// Rejected formula text.  The message carries line/column information.
class ParseError : public Error {
public:
  ParseError(int line, int column, const std::string& msg)
      : Error("parse error at line " + std::to_string(line) + ", column " +
              std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

private:
  int line_;
  int column_;
};

/// A configured resource budget would be exceeded.  The message includes the
/// offending cost estimate so callers can decide whether to raise the budget.
class BudgetError : public Error {
public:
  using Error::Error;
};

}  // namespace gca
