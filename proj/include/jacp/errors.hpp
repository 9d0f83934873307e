#pragma once

#include <stdexcept>
#include <string>

namespace jacp {

// Mixing elements bound to different prime fields.
class FieldMismatchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Requested the bar form of a polynomial all of whose terms live in
// k[x1^p, ..., xn^p] (constants and zero included); no such form exists.
class NoBarFormError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Text input rejected by a parser; carries 1-based line/column of the failure.
class ParseError : public std::invalid_argument {
 public:
  ParseError(std::string what, int line, int column)
      : std::invalid_argument("parse error at " + std::to_string(line) + ":" +
                              std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

// A family/map parameterization violates one of its documented constraints.
// `code` is a short stable identifier (e.g. "a=1-mod-p") surfaced verbatim
// by the CLI; `what()` carries the human-readable form.
class ConstraintError : public std::invalid_argument {
 public:
  ConstraintError(std::string code, const std::string& what)
      : std::invalid_argument(what), code_(std::move(code)) {}

  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

}  // namespace jacp
