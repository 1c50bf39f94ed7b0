#pragma once

#include <stdexcept>
#include <string>

namespace domlab {

enum class ErrorKind {
  kNonUnitMass,
  kUnknownOutcome,
  kUnknownAgent,
  kUnknownStrategy,
  kInvalidInput,
  kSizeLimit,
  kNotStrict,
  kDomainViolation,
  kScfPartial,
  kTimeout,
  kDictatorialCase,
  kLabelClash,
  kEmptyWitness,
  kWrongArity,
  kParse,
};

const char* error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what),
        kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// Parse failure with a 1-based source position (0 when unknown).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int column)
      : Error(ErrorKind::kParse, what + " at line " + std::to_string(line) +
                                     ", column " + std::to_string(column)),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace domlab
