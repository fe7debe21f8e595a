#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tasbm {

// Base of every error raised by the library. The CLI maps the subclasses onto
// exit codes, so new error kinds should derive from one of these.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class OverflowError : public Error {
 public:
  using Error::Error;
};

// A statistic that has no defined value for the given input (e.g. MSRE with
// every observation zero).
class UndefinedResultError : public Error {
 public:
  using Error::Error;
};

// A configuration outside the regime an operation supports (e.g. variance
// with T != delta).
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

}  // namespace tasbm
