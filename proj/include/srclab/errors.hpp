#pragma once

#include <stdexcept>
#include <string>

namespace srclab {

/// Base of every error raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "Error"; }
};

#define SRCLAB_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                       \
   public:                                                          \
    using Error::Error;                                             \
    const char* kind() const noexcept override { return #Name; }    \
  };

// Evaluation outside an expression's domain (log of non-positive, ...).
SRCLAB_DEFINE_ERROR(DomainError)
SRCLAB_DEFINE_ERROR(DimensionMismatch)
// A derived field was asked for more derivatives than its inputs carry.
SRCLAB_DEFINE_ERROR(OrderExhausted)
SRCLAB_DEFINE_ERROR(SingularFrame)
SRCLAB_DEFINE_ERROR(MetricNotSPD)
// An operation divides by l-2 (or l-1) and the horizontal rank is too small.
SRCLAB_DEFINE_ERROR(RankTooSmall)
SRCLAB_DEFINE_ERROR(UnknownEntry)

#undef SRCLAB_DEFINE_ERROR

/// Structural problem in a spec document; carries the offending line.
class ValidationError : public Error {
 public:
  ValidationError(int line, const std::string& message)
      : Error("line " + std::to_string(line) + ": " + message), line_(line) {}
  const char* kind() const noexcept override { return "ValidationError"; }
  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// Syntax error with a 1-based source location.
class ParseError : public Error {
 public:
  ParseError(int line, int column, const std::string& message)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}
  const char* kind() const noexcept override { return "ParseError"; }
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace srclab
