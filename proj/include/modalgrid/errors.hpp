#pragma once

#include <stdexcept>
#include <string>

namespace modalgrid {

// Syntax error in one of the text formats (formula, kernel, model file).
// Positions are 1-based.
class ParseError : public std::runtime_error {
public:
  ParseError(int line, int column, const std::string& message)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line), column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

private:
  int line_;
  int column_;
};

// An operation was called on inputs outside its stated domain (non-reflexive
// model passed to the quotient, reserved variable in a reduction input, ...).
// The message names the witnessing worlds or variables.
class PreconditionViolation : public std::runtime_error {
public:
  explicit PreconditionViolation(const std::string& message) : std::runtime_error(message) {}
};

}  // namespace modalgrid
