#include "qgs/error.hpp"

namespace qgs {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Parse: return "parse error";
    case ErrorKind::Schema: return "schema error";
    case ErrorKind::ConstraintTooLarge: return "constraint too large";
    case ErrorKind::Timeout: return "timeout";
    case ErrorKind::NoSolutions: return "no solutions";
    case ErrorKind::EmptyFormula: return "empty formula";
    case ErrorKind::WidthExceeded: return "width exceeded";
    case ErrorKind::TooManyVariables: return "too many variables";
    case ErrorKind::LengthMismatch: return "length mismatch";
    case ErrorKind::Domain: return "domain error";
    case ErrorKind::Index: return "index error";
    case ErrorKind::DegenerateTest: return "degenerate test";
    case ErrorKind::InvalidArgument: return "invalid argument";
  }
  return "error";
}

namespace {

std::string format_position(std::size_t line, std::size_t column,
                            const std::string& message) {
  if (line == 0) return message;
  return std::to_string(line) + ":" + std::to_string(column) + ": " + message;
}

}  // namespace

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& message)
    : Error(ErrorKind::Parse, format_position(line, column, message)),
      line_(line),
      column_(column),
      detail_(message) {}

}  // namespace qgs
