#pragma once

#include <stdexcept>
#include <string>

namespace sc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed text input (.struct, .schema, PBM/PGM, logs, netlists).
class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

// A structure or derived object violates its invariants.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// An operation was called outside its precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A configured size cap was exceeded.
class LimitError : public Error {
 public:
  using Error::Error;
};

}  // namespace sc
