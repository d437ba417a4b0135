#pragma once

#include <stdexcept>
#include <string>

namespace recipro {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "Error"; }
};

#define RECIPRO_DECLARE_ERROR(Name)                                   \
  class Name : public Error {                                         \
   public:                                                            \
    using Error::Error;                                               \
    const char* kind() const noexcept override { return #Name; }      \
  };

RECIPRO_DECLARE_ERROR(DivisionByZeroExpression)
RECIPRO_DECLARE_ERROR(MissingAtom)
RECIPRO_DECLARE_ERROR(NumericPoleError)
RECIPRO_DECLARE_ERROR(DuplicateName)
RECIPRO_DECLARE_ERROR(OrderOverflow)
RECIPRO_DECLARE_ERROR(NotSolvable)
RECIPRO_DECLARE_ERROR(NonTermination)
RECIPRO_DECLARE_ERROR(ZeroPivot)
RECIPRO_DECLARE_ERROR(UneliminableField)
RECIPRO_DECLARE_ERROR(NotLinearInEigenfunction)
RECIPRO_DECLARE_ERROR(InconsistentReduction)
RECIPRO_DECLARE_ERROR(NotConservative)
RECIPRO_DECLARE_ERROR(AnsatzTooLarge)
RECIPRO_DECLARE_ERROR(UnknownName)
RECIPRO_DECLARE_ERROR(InvalidArgument)

#undef RECIPRO_DECLARE_ERROR

class SyntaxError : public Error {
 public:
  SyntaxError(int line, int column, const std::string& message)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column),
        message_(message) {}
  const char* kind() const noexcept override { return "SyntaxError"; }
  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& message() const { return message_; }

 private:
  int line_;
  int column_;
  std::string message_;
};

}  // namespace recipro
