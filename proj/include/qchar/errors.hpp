#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace qchar {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

class NonUnitLeadingCoefficient : public Error {
 public:
  using Error::Error;
};

class ZeroSeries : public Error {
 public:
  using Error::Error;
};

class InsufficientOrder : public Error {
 public:
  using Error::Error;
};

class WindowUnderflow : public Error {
 public:
  using Error::Error;
};

class OutOfWindow : public Error {
 public:
  using Error::Error;
};

class ResourceLimit : public Error {
 public:
  using Error::Error;
};

/// Byte range [begin, end) into a DSL source string.
struct SourceSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
  friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

/// Errors carrying a location in DSL source text.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, SourceSpan span) : Error(what), span_(span) {}
  SourceSpan span() const { return span_; }

 private:
  SourceSpan span_;
};

class SyntaxError : public ParseError {
 public:
  SyntaxError(const std::string& what, SourceSpan span, std::vector<std::string> expected)
      : ParseError(what, span), expected_(std::move(expected)) {}
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  std::vector<std::string> expected_;
};

class UnknownBuiltin : public ParseError {
 public:
  using ParseError::ParseError;
};

class ArityError : public ParseError {
 public:
  using ParseError::ParseError;
};

class DivisionByNonUnit : public Error {
 public:
  using Error::Error;
};

class OrderUnderflow : public Error {
 public:
  using Error::Error;
};

}  // namespace qchar
