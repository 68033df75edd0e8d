#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ghyltl {

/// Base class of every error raised by the toolkit.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed concrete syntax; carries a 1-based line/column.
class ParseError : public Error {
public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

private:
  std::size_t line_;
  std::size_t column_;
};

/// A value violates a structural precondition (unknown variable, overlapping
/// alphabets, empty loop, ...).
class DomainError : public Error {
public:
  using Error::Error;
};

/// A bounded procedure was asked to certify something outside its bounds.
class BoundError : public Error {
public:
  using Error::Error;
};

} // namespace ghyltl
